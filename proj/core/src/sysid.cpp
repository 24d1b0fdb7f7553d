#include "smasim/sysid.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <nlohmann/json.hpp>

#include "smasim/errors.hpp"
#include "smasim/spectrum.hpp"

namespace smasim {

void SysIdDataset::validate() const {
    input.validate();
    output.validate();
    if (input.size() != output.size())
        throw parameter_error("SysIdDataset: input/output lengths differ");
    if (input.sample_rate_hz != output.sample_rate_hz)
        throw parameter_error("SysIdDataset: input/output sample rates differ");
}

std::vector<double> denominator_root_radii(std::span<const double> a) {
    const std::size_t n = a.size();
    std::vector<double> radii;
    if (n == 0) return radii;
    // Roots of z^n + a1 z^(n-1) + ... + an via the companion matrix.
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                                      static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        companion(0, static_cast<Eigen::Index>(i)) = -a[i];
        if (i + 1 < n) companion(static_cast<Eigen::Index>(i + 1), static_cast<Eigen::Index>(i)) = 1.0;
    }
    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, /*computeEigenvectors=*/false);
    radii.reserve(n);
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i)
        radii.push_back(std::abs(solver.eigenvalues()[i]));
    std::sort(radii.begin(), radii.end(), std::greater<>());
    return radii;
}

LtiModel::LtiModel(ModelKind kind, std::vector<double> b, std::vector<double> a, double fs)
    : kind_(kind), b_(std::move(b)), a_(std::move(a)), sample_rate_hz_(fs) {}

// Roots this close to the unit circle are treated as on it: eigenvalues of a
// defective companion matrix (a double root at z = 1, say) carry sqrt(eps)
// perturbations.
constexpr double kStabilityMargin = 1e-7;

LtiModel LtiModel::iir(std::vector<double> b, std::vector<double> a, double sample_rate_hz) {
    if (b.empty()) throw parameter_error("LtiModel: b must be non-empty");
    if (!(sample_rate_hz > 0.0)) throw parameter_error("LtiModel: sample_rate_hz must be > 0");
    auto radii = denominator_root_radii(a);
    if (!radii.empty() && radii.front() > 1.0 - kStabilityMargin) {
        std::vector<double> offending;
        for (double r : radii)
            if (r > 1.0 - kStabilityMargin) offending.push_back(r);
        throw instability_error("LtiModel: denominator roots on/outside the unit circle", offending);
    }
    return LtiModel(ModelKind::iir, std::move(b), std::move(a), sample_rate_hz);
}

LtiModel LtiModel::fir(std::vector<double> b, double sample_rate_hz) {
    if (b.empty()) throw parameter_error("LtiModel: b must be non-empty");
    if (!(sample_rate_hz > 0.0)) throw parameter_error("LtiModel: sample_rate_hz must be > 0");
    return LtiModel(ModelKind::fir, std::move(b), {}, sample_rate_hz);
}

nlohmann::json LtiModel::to_json() const {
    return nlohmann::json{{"schema", "smasim/lti-v1"},
                          {"kind", kind_ == ModelKind::iir ? "iir" : "fir"},
                          {"sample_rate_hz", sample_rate_hz_},
                          {"b", b_},
                          {"a", a_},
                          {"static_gain", static_gain(*this)}};
}

LtiModel LtiModel::from_json(const nlohmann::json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    auto b = j.at("b").get<std::vector<double>>();
    const double fs = j.at("sample_rate_hz").get<double>();
    if (kind == "fir") return fir(std::move(b), fs);
    if (kind == "iir") return iir(std::move(b), j.at("a").get<std::vector<double>>(), fs);
    throw config_error("LtiModel: unknown kind '" + kind + "'");
}

namespace {

struct LsSolution {
    Eigen::VectorXd theta;
    bool rank_deficient = false;
    double rel_sse = 0.0;  // equation-error SSE relative to the output energy
};

// Solve the normal equations. The fast path is a plain LDLT; when the Gram
// matrix is rank deficient or too ill-conditioned for that to hold (smooth
// band-limited excitation makes lagged regressors nearly collinear), fall
// back to a rank-revealing minimum-norm solve.
LsSolution solve_normal_equations(const Eigen::MatrixXd& gram, const Eigen::VectorXd& rhs) {
    const double trace = gram.trace();
    if (!(trace > 0.0))
        throw identifiability_error("least squares: regressor is identically zero");
    const double scale = rhs.norm() + trace;

    Eigen::LDLT<Eigen::MatrixXd> plain(gram);
    if (plain.info() == Eigen::Success) {
        Eigen::VectorXd theta = plain.solve(rhs);
        if (theta.allFinite() && (gram * theta - rhs).norm() <= 1e-10 * scale)
            return {std::move(theta), false};
    }

    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(gram);
    cod.setThreshold(1e-13);
    Eigen::VectorXd theta = cod.solve(rhs);
    if (!theta.allFinite())
        throw identifiability_error("least squares: regressor rank-deficient beyond recovery");
    return {std::move(theta), cod.rank() < gram.rows()};
}

// ARX normal equations at one order; the regressor matrix itself is never
// materialized (201 columns for order-100 fits).
LsSolution arx_solve(const SysIdDataset& data, std::size_t order) {
    const auto& u = data.input.samples;
    const auto& y = data.output.samples;
    const std::size_t na = order;
    const std::size_t nb = order + 1;  // b0..b_order
    const std::size_t p = na + nb;

    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(p),
                                                 static_cast<Eigen::Index>(p));
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p));
    Eigen::VectorXd row(static_cast<Eigen::Index>(p));
    double yty = 0.0;
    for (std::size_t k = order; k < data.size(); ++k) {
        for (std::size_t i = 0; i < na; ++i) row(static_cast<Eigen::Index>(i)) = -y[k - 1 - i];
        for (std::size_t j = 0; j < nb; ++j) row(static_cast<Eigen::Index>(na + j)) = u[k - j];
        gram.selfadjointView<Eigen::Lower>().rankUpdate(row);
        rhs += row * y[k];
        yty += y[k] * y[k];
    }
    gram.triangularView<Eigen::StrictlyUpper>() = gram.transpose();
    LsSolution sol = solve_normal_equations(gram, rhs);
    const double sse =
        yty - 2.0 * sol.theta.dot(rhs) + sol.theta.dot(gram * sol.theta);
    sol.rel_sse = yty > 0.0 ? std::max(0.0, sse) / yty : 0.0;
    return sol;
}

}  // namespace

LtiModel fit_iir_ls(const SysIdDataset& data, std::size_t order) {
    data.validate();
    if (order < 1) throw parameter_error("fit_iir_ls: order must be >= 1");
    if (data.size() <= 3 * order)
        throw parameter_error("fit_iir_ls: need more than 3*order samples");

    // A rank-deficient regressor means the data is explained exactly by a
    // lower-order model and the surplus coefficients are a free (and possibly
    // unstable) pole/zero cancellation. Descend to the largest fully
    // identified order and zero-pad; the response is unchanged.
    for (std::size_t fit_order = order;; --fit_order) {
        const LsSolution sol = arx_solve(data, fit_order);
        std::vector<double> a(sol.theta.data(), sol.theta.data() + fit_order);
        std::vector<double> b(sol.theta.data() + fit_order, sol.theta.data() + 2 * fit_order + 1);
        try {
            LtiModel model = LtiModel::iir(std::move(b), std::move(a), data.sample_rate_hz());
            if (fit_order == order) return model;
            std::vector<double> bp = model.b();
            std::vector<double> ap = model.a();
            bp.resize(order + 1, 0.0);
            ap.resize(order, 0.0);
            return LtiModel::iir(std::move(bp), std::move(ap), data.sample_rate_hz());
        } catch (const instability_error&) {
            // Only a degenerate fit (rank-deficient regressor or an exact
            // interpolation) licenses the descent; a genuinely unstable
            // identification surfaces to the caller.
            if (!(sol.rank_deficient || sol.rel_sse < 1e-12) || fit_order == 1) throw;
        }
    }
}

LtiModel fit_fir_ls(const SysIdDataset& data, std::size_t order) {
    data.validate();
    const std::size_t n = data.size();
    if (n <= 3 * order)
        throw parameter_error("fit_fir_ls: need more than 3*order samples");

    const auto& u = data.input.samples;
    const auto& y = data.output.samples;
    const std::size_t p = order + 1;
    const std::size_t k0 = order;

    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(p),
                                                 static_cast<Eigen::Index>(p));
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p));
    Eigen::VectorXd row(static_cast<Eigen::Index>(p));
    for (std::size_t k = k0; k < n; ++k) {
        for (std::size_t j = 0; j < p; ++j) row(static_cast<Eigen::Index>(j)) = u[k - j];
        gram.selfadjointView<Eigen::Lower>().rankUpdate(row);
        rhs += row * y[k];
    }
    gram.triangularView<Eigen::StrictlyUpper>() = gram.transpose();

    const LsSolution sol = solve_normal_equations(gram, rhs);
    return LtiModel::fir(std::vector<double>(sol.theta.data(), sol.theta.data() + p),
                         data.sample_rate_hz());
}

FrequencyResponse frequency_response(const LtiModel& model, std::span<const double> freqs_hz) {
    const double nyquist = model.sample_rate_hz() / 2.0;
    FrequencyResponse fr;
    fr.freqs_hz.assign(freqs_hz.begin(), freqs_hz.end());
    fr.magnitude_db.reserve(freqs_hz.size());
    fr.phase_deg.reserve(freqs_hz.size());

    double prev_deg = 0.0;
    bool first = true;
    for (double f : freqs_hz) {
        if (!(f >= 0.0) || f >= nyquist)
            throw parameter_error("frequency_response: frequency must be in [0, Nyquist)");
        const double w = 2.0 * std::numbers::pi * f / model.sample_rate_hz();
        const std::complex<double> z_inv = std::polar(1.0, -w);
        std::complex<double> num(0.0, 0.0), zp(1.0, 0.0);
        for (double bj : model.b()) {
            num += bj * zp;
            zp *= z_inv;
        }
        std::complex<double> den(1.0, 0.0);
        zp = z_inv;
        for (double ai : model.a()) {
            den += ai * zp;
            zp *= z_inv;
        }
        const std::complex<double> h = num / den;
        fr.magnitude_db.push_back(20.0 * std::log10(std::abs(h)));
        double deg = std::arg(h) * 180.0 / std::numbers::pi;
        if (!first) {
            while (deg - prev_deg > 180.0) deg -= 360.0;
            while (deg - prev_deg < -180.0) deg += 360.0;
        }
        fr.phase_deg.push_back(deg);
        prev_deg = deg;
        first = false;
    }
    fr.valid_upto_hz = fr.freqs_hz.empty() ? 0.0 : fr.freqs_hz.back();
    return fr;
}

double static_gain(const LtiModel& model) {
    double sb = 0.0, sa = 0.0;
    for (double v : model.b()) sb += v;
    for (double v : model.a()) sa += v;
    return sb / (1.0 + sa);
}

double excitation_bandwidth(const Waveform& input, double floor_fraction) {
    input.validate();
    if (!(floor_fraction > 0.0 && floor_fraction < 1.0))
        throw parameter_error("excitation_bandwidth: floor_fraction must be in (0,1)");
    bool all_zero = true;
    for (double v : input.samples)
        if (v != 0.0) { all_zero = false; break; }
    if (all_zero)
        throw parameter_error("excitation_bandwidth: all-zero input");

    const Spectrum spec = dft_magnitudes(input.samples, input.sample_rate_hz);
    double max_mag = 0.0;
    for (double m : spec.magnitude) max_mag = std::max(max_mag, m);
    double bw = 0.0;
    for (std::size_t k = 0; k < spec.magnitude.size(); ++k)
        if (spec.magnitude[k] > floor_fraction * max_mag) bw = spec.freqs_hz[k];
    return bw;
}

Waveform apply_model(const LtiModel& model, const Waveform& x) {
    x.validate();
    if (x.sample_rate_hz != model.sample_rate_hz())
        throw parameter_error("apply_model: waveform/model sample rates differ");
    const auto& b = model.b();
    const auto& a = model.a();
    Waveform y = x;
    const std::size_t n = x.samples.size();
    for (std::size_t k = 0; k < n; ++k) {
        double acc = 0.0;
        for (std::size_t j = 0; j < b.size() && j <= k; ++j) acc += b[j] * x.samples[k - j];
        for (std::size_t i = 0; i < a.size() && i < k; ++i) acc -= a[i] * y.samples[k - 1 - i];
        y.samples[k] = acc;
    }
    return y;
}

Waveform compensate_static(const Waveform& measured, double gain) {
    measured.validate();
    if (gain == 0.0)
        throw parameter_error("compensate_static: gain must be nonzero");
    Waveform out = measured;
    for (auto& v : out.samples) v /= gain;
    return out;
}

}
