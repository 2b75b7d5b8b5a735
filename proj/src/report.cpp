#include "koszulkit/report.hpp"

#include <sstream>

namespace koszulkit {

namespace {

template <class T>
json from_level_one(const std::vector<T>& v)
{
    json out = json::array();
    for (std::size_t n = 1; n < v.size(); ++n) out.push_back(v[n]);
    return out;
}

json point_json(const std::vector<Scalar>& coords)
{
    json c = json::array();
    for (const auto& s : coords) c.push_back(scalar_to_json(s));
    return c;
}

const char* kInconclusiveNote =
    "a certificate for a single K can witness the obstruction mechanism but cannot rule out other compact "
    "perturbations; 'inconclusive' means this K gives no witness";

} // namespace

json eigen_to_json(const Eigen::MatrixXcd& m) { return mat_to_json(Mat::from_eigen(m)); }

json cohomology_report(const CohomologyReport& r, Mode mode)
{
    return {{"command", "cohomology"},
            {"mode", to_string(mode)},
            {"dims", r.dims},
            {"index", r.index},
            {"invertible", r.invertible}};
}

json spectrum_report(const JointSpectrum& s)
{
    json pts = json::array();
    for (const auto& p : s.points) pts.push_back({{"coords", point_json(p.coords)}, {"multiplicity", p.multiplicity}});
    return {{"command", "spectrum"},
            {"mode", to_string(s.mode)},
            {"points", std::move(pts)},
            {"total_multiplicity", s.total_multiplicity()}};
}

json les_report(const LesReport& r)
{
    return {{"command", "les"},
            {"dims_direct", r.dims_direct},
            {"dims_sequence", r.dims_sequence},
            {"induced_ranks", r.induced_ranks},
            {"agree", r.agree},
            {"induced_isomorphisms", r.induced_isomorphisms},
            {"index", r.index}};
}

json index_report(const IndexCertificate& c, const BandedOperator& t)
{
    json out = {{"command", "index"},
                {"index", c.index},
                {"dim_ker", c.dim_ker},
                {"dim_coker", c.dim_coker},
                {"certified", c.certified},
                {"N", c.N}};
    if (t.fredholm()) out["fredholm"] = *t.fredholm();
    return out;
}

json tower_report(const KernelTower& tw, const CommutantBlocks* blocks)
{
    json levels = json::array();
    for (std::size_t n = 1; n <= tw.max_level; ++n) {
        json l = {{"n", n}, {"dim", tw.dims[n]}};
        // A_1 maps H_1 to H_0 = 0.
        l["A"] = n >= 2 ? eigen_to_json(tw.A[n]) : mat_to_json(Mat(0, tw.dims[1], Mode::floating));
        if (blocks) l["X"] = eigen_to_json(blocks->X[n]);
        levels.push_back(std::move(l));
    }
    json out = {{"command", "tower"},
                {"index", tw.index},
                {"dims", from_level_one(tw.dims)},
                {"n0", tw.n0},
                {"levels", std::move(levels)},
                {"orthogonality", tw.orthogonality},
                {"block_residual", tw.block_residual}};
    if (blocks) {
        out["intertwining"] = json::array();
        for (std::size_t n = 2; n < blocks->intertwining.size(); ++n) out["intertwining"].push_back(blocks->intertwining[n]);
        out["charpoly_gap"] = blocks->charpoly_gap;
    }
    return out;
}

json obstruction_report(const ObstructionCertificate& oc)
{
    json out = tower_report(oc.tower, &oc.blocks);
    out["command"] = "obstruct";
    out["r"] = oc.r;
    out["norms"] = from_level_one(oc.norms);
    out["levels_checked"] = oc.levels_checked;
    out["verdict"] = to_string(oc.verdict);
    if (oc.verdict == Verdict::inconclusive) out["note"] = kInconclusiveNote;
    return out;
}

json growth_report(const std::vector<GrowthRow>& rows, std::size_t rank_bound, long index)
{
    json rs = json::array();
    std::optional<unsigned> first;
    for (const auto& r : rows) {
        rs.push_back({{"m", r.m},
                      {"dim_ker", r.dim_ker},
                      {"dim_coker", r.dim_coker},
                      {"index", r.index},
                      {"exceeds", r.exceeds}});
        if (r.exceeds && !first) first = r.m;
    }
    json out = {{"command", "growth"}, {"rank_bound", rank_bound}, {"index", index}, {"rows", std::move(rs)}};
    out["first_exceeding_m"] = first ? json(*first) : json(nullptr);
    return out;
}

std::string growth_csv(const std::vector<GrowthRow>& rows)
{
    std::ostringstream out;
    out << "m,dim_ker,dim_coker,index,exceeds\n";
    for (const auto& r : rows)
        out << r.m << ',' << r.dim_ker << ',' << r.dim_coker << ',' << r.index << ',' << (r.exceeds ? "true" : "false")
            << '\n';
    return out.str();
}

} // namespace koszulkit
