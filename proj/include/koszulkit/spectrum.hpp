#pragma once

#include "koszulkit/koszul.hpp"

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

namespace koszulkit {

/// Relative conditioning threshold for float-mode common-eigenvector extraction.
inline constexpr double kDeflationThreshold = 1e-8;

struct SpectrumPoint {
    std::vector<Scalar> coords;
    std::size_t multiplicity = 0;
};

/// Taylor spectrum of a commuting matrix tuple with algebraic multiplicities.
struct JointSpectrum {
    Mode mode = Mode::exact;
    std::vector<SpectrumPoint> points; // sorted lexicographically by (re, im) per coordinate
    std::size_t total_multiplicity() const;
};

/// Common-eigenvector deflation. T_1's eigenvalues are taken first (smallest by
/// (re, im)), then T_2 within that eigenspace, and so on; the common vector is
/// split off and the quotient tuple is processed next. Exact mode requires
/// Gaussian-rational eigenvalues; failures raise DeflationFailure.
JointSpectrum joint_spectrum(const CommutingTuple& t);

/// True when z - T is not invertible in the Koszul sense.
bool in_spectrum(const CommutingTuple& t, const std::vector<Scalar>& z, double tau_rank = kDefaultTauRank);

/// One term c * z_1^{k_1} ... z_n^{k_n}.
struct Monomial {
    Scalar coeff;
    std::vector<unsigned> exponents;
};

/// Polynomial map C^n -> C^m, one list of terms per output component.
class PolyMap {
public:
    PolyMap(std::size_t arity, std::vector<std::vector<Monomial>> components);

    /// z -> z on C^n.
    static PolyMap identity(std::size_t n, Mode mode = Mode::exact);

    std::size_t arity() const { return arity_; }
    std::size_t outputs() const { return components_.size(); }
    const std::vector<std::vector<Monomial>>& components() const { return components_; }
    std::size_t degree() const;

    std::vector<Scalar> eval(const std::vector<Scalar>& z) const;
    std::vector<std::complex<double>> eval(const std::vector<std::complex<double>>& z) const;
    /// Same map with coefficients converted to `mode`.
    PolyMap to_mode(Mode mode) const;

private:
    std::size_t arity_;
    std::vector<std::vector<Monomial>> components_;
};

/// (f_1(T), ..., f_m(T)); exact in exact mode.
CommutingTuple apply_poly_map(const PolyMap& f, const CommutingTuple& t);

/// f o g (g: C^n -> C^k, f: C^k -> C^n'). Throws ShapeError on arity mismatch.
PolyMap compose(const PolyMap& f, const PolyMap& g);

/// f(sigma(T)) == sigma(f(T)) as sets, coordinatewise within tol.
bool spectral_mapping_check(const PolyMap& f, const CommutingTuple& t, double tol);

/// Requires cohomology(T) invertible (PreconditionError otherwise) and reports
/// whether f(T) is invertible. The f^{-1}(0) = {0} hypothesis is the caller's.
bool lemma11_check(const CommutingTuple& t, const PolyMap& f, double tol = kDefaultTauRank);

struct ZeroFiberReport {
    bool vanishes_at_origin = false;
    std::size_t samples = 0;
    /// A sampled nonzero point where |f(z)| <= tol, if one was hit.
    std::optional<std::vector<std::complex<double>>> counterexample;
};

/// Spot check of f^{-1}(0) = {0}: exact evaluation at the origin plus random
/// samples in the polydisc of the given radius.
ZeroFiberReport zero_fiber_spot_check(const PolyMap& f, std::uint64_t seed, std::size_t samples = 1000,
                                      double radius = 4.0, double tol = 1e-9);

} // namespace koszulkit
