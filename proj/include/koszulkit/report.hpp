#pragma once

#include "koszulkit/io.hpp"
#include "koszulkit/tower.hpp"

#include <string>
#include <vector>

namespace koszulkit {

json cohomology_report(const CohomologyReport& r, Mode mode);
json spectrum_report(const JointSpectrum& s);
json les_report(const LesReport& r);
json index_report(const IndexCertificate& c, const BandedOperator& t);
/// Tower layers with A_n, plus X_n when commutant blocks are given.
json tower_report(const KernelTower& tw, const CommutantBlocks* blocks = nullptr);
/// Tower report extended with r, norms and the verdict.
json obstruction_report(const ObstructionCertificate& oc);
json growth_report(const std::vector<GrowthRow>& rows, std::size_t rank_bound, long index);
/// Header "m,dim_ker,dim_coker,index,exceeds", one line per row.
std::string growth_csv(const std::vector<GrowthRow>& rows);

json eigen_to_json(const Eigen::MatrixXcd& m);

} // namespace koszulkit
