#include "gcm/ulam.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "gcm/errors.hpp"
#include "gcm/moebius.hpp"
#include "gcm/site_maps.hpp"

namespace gcm {

double bin_midpoint(int i, int n_bins) {
    return -kStateHalfWidth + (i + 0.5) / static_cast<double>(n_bins);
}

GridDensity constant_density(int n_bins) {
    return {std::vector<double>(static_cast<std::size_t>(n_bins), 1.0)};
}

GridDensity sample_on_grid(int n_bins, const std::function<double(double)>& density) {
    GridDensity u;
    u.values.resize(static_cast<std::size_t>(n_bins));
    for (int i = 0; i < n_bins; ++i) u.values[static_cast<std::size_t>(i)] = density(bin_midpoint(i, n_bins));
    return u;
}

double grid_field(const GridDensity& u) {
    const int n = u.n_bins();
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += bin_midpoint(i, n) * u.values[static_cast<std::size_t>(i)];
    return s / n;
}

double grid_mass(const GridDensity& u) {
    double s = 0.0;
    for (double v : u.values) s += v;
    return s / u.n_bins();
}

double l1_distance(const GridDensity& u, const GridDensity& v) {
    if (u.n_bins() != v.n_bins()) throw ShapeMismatch("grid densities differ in resolution");
    double s = 0.0;
    for (std::size_t i = 0; i < u.values.size(); ++i) s += std::fabs(u.values[i] - v.values[i]);
    return s / u.n_bins();
}

double grid_variation(const GridDensity& u) {
    double s = 0.0;
    for (std::size_t i = 1; i < u.values.size(); ++i) s += std::fabs(u.values[i] - u.values[i - 1]);
    return s;
}

struct UlamMatrix::Impl {
    double r = 0.0;
    Eigen::SparseMatrix<double, Eigen::RowMajor> matrix;  // (i, j) = mass of bin i sent to bin j
};

int UlamMatrix::n_bins() const { return static_cast<int>(impl_->matrix.rows()); }
double UlamMatrix::param() const { return impl_->r; }

std::vector<double> UlamMatrix::row_sums() const {
    const auto& m = impl_->matrix;
    std::vector<double> sums(static_cast<std::size_t>(m.rows()), 0.0);
    for (int i = 0; i < m.outerSize(); ++i) {
        for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(m, i); it; ++it) {
            sums[static_cast<std::size_t>(i)] += it.value();
        }
    }
    return sums;
}

namespace {

// Preimages of all grid boundaries lying inside the branch image [fa, fb],
// so that per-row weights telescope exactly to the branch-piece length.
void accumulate_branch(std::vector<Eigen::Triplet<double>>& triplets, int i, int n,
                       const Moebius& inv, double a, double b, double fa, double fb) {
    if (b <= a) return;
    const double h = 1.0 / n;
    const auto grid = [&](int j) { return -kStateHalfWidth + j * h; };
    // columns that intersect [fa, fb]
    int j_lo = std::clamp(static_cast<int>(std::floor((fa + kStateHalfWidth) * n)), 0, n - 1);
    int j_hi = std::clamp(static_cast<int>(std::floor((fb + kStateHalfWidth) * n)), 0, n - 1);
    while (j_lo > 0 && grid(j_lo) > fa) --j_lo;
    while (j_hi < n - 1 && grid(j_hi + 1) < fb) ++j_hi;
    double pre_prev = a;
    for (int j = j_lo; j <= j_hi; ++j) {
        const double edge = grid(j + 1);
        double pre_next;
        if (j == j_hi || edge >= fb) {
            pre_next = b;
        } else {
            pre_next = std::clamp(apply(inv, edge), a, b);
        }
        const double w = (pre_next - pre_prev) * n;
        if (w > 0.0) triplets.emplace_back(i, j, w);
        pre_prev = pre_next;
        if (pre_next >= b) break;
    }
}

} // namespace

UlamMatrix build_ulam(double r, int n_bins) {
    if (n_bins < 2) throw std::invalid_argument("Ulam discretization needs at least 2 bins");
    if (std::fabs(r) > kParamBound + 1e-9) {
        throw ParamOutOfRange("Ulam oracle restricted to |r| <= 0.4");
    }
    const int n = n_bins;
    const double h = 1.0 / n;
    const double alpha = branch_point(r);
    const Moebius lower = lower_branch_matrix(r);
    const Moebius upper = upper_branch_matrix(r);
    const Moebius inv_lower = inverse(lower);
    const Moebius inv_upper = inverse(upper);

    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(static_cast<std::size_t>(n) * 6);
    for (int i = 0; i < n; ++i) {
        const double x0 = -kStateHalfWidth + i * h;
        const double x1 = x0 + h;
        // lower-branch piece [x0, min(x1, alpha)), upper-branch piece [max(x0, alpha), x1]
        const double lo_b = std::min(x1, alpha);
        if (lo_b > x0) {
            const double fa = std::clamp(apply(lower, x0), -kStateHalfWidth, kStateHalfWidth);
            const double fb = std::clamp(apply(lower, lo_b), -kStateHalfWidth, kStateHalfWidth);
            accumulate_branch(triplets, i, n, inv_lower, x0, lo_b, fa, fb);
        }
        const double up_a = std::max(x0, alpha);
        if (x1 > up_a) {
            const double fa = std::clamp(apply(upper, up_a), -kStateHalfWidth, kStateHalfWidth);
            const double fb = std::clamp(apply(upper, x1), -kStateHalfWidth, kStateHalfWidth);
            accumulate_branch(triplets, i, n, inv_upper, up_a, x1, fa, fb);
        }
    }

    auto impl = std::make_shared<UlamMatrix::Impl>();
    impl->r = r;
    impl->matrix.resize(n, n);
    impl->matrix.setFromTriplets(triplets.begin(), triplets.end());
    UlamMatrix m;
    m.impl_ = std::move(impl);
    return m;
}

GridDensity apply_pfo(const UlamMatrix& m, const GridDensity& u) {
    const auto& mat = m.impl_->matrix;
    if (mat.rows() != u.n_bins()) throw ShapeMismatch("density resolution does not match matrix");
    GridDensity out;
    out.values.assign(u.values.size(), 0.0);
    for (int i = 0; i < mat.outerSize(); ++i) {
        const double ui = u.values[static_cast<std::size_t>(i)];
        if (ui == 0.0) continue;
        for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(mat, i); it; ++it) {
            out.values[static_cast<std::size_t>(it.col())] += ui * it.value();
        }
    }
    return out;
}

struct UlamCache::State {
    std::shared_mutex mutex;
    std::unordered_map<long long, UlamMatrix> matrices;
};

UlamCache::UlamCache(int n_bins) : n_bins_(n_bins), state_(std::make_shared<State>()) {}

std::size_t UlamCache::size() const {
    std::shared_lock lock(state_->mutex);
    return state_->matrices.size();
}

UlamMatrix UlamCache::matrix(double r) {
    const long long key = llround(r * 1e6);
    {
        std::shared_lock lock(state_->mutex);
        if (auto it = state_->matrices.find(key); it != state_->matrices.end()) return it->second;
    }
    UlamMatrix m = build_ulam(static_cast<double>(key) * 1e-6, n_bins_);
    std::unique_lock lock(state_->mutex);
    return state_->matrices.try_emplace(key, std::move(m)).first->second;
}

SelfConsistentGridStep apply_self_consistent_pfo(const Feedback& f, const GridDensity& u,
                                                 UlamCache& cache) {
    const double r = g_eval(f, grid_field(u));
    const double r_used = static_cast<double>(llround(r * 1e6)) * 1e-6;
    return {apply_pfo(cache.matrix(r), u), r_used};
}

Eigenpair linearization_eigenpair(double strength, int n_bins) {
    if (n_bins < 64) throw std::invalid_argument("linearization needs n_bins >= 64");
    if (!(strength > 0.0)) throw std::invalid_argument("linearization needs strength > 0");
    const UlamMatrix p0 = build_ulam(0.0, n_bins);
    const int n = n_bins;

    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i) x[i] = bin_midpoint(i, n);

    const auto apply_q = [&](const Eigen::VectorXd& v) {
        GridDensity tmp{std::vector<double>(v.data(), v.data() + n)};
        GridDensity pv = apply_pfo(p0, tmp);
        Eigen::VectorXd out = Eigen::Map<Eigen::VectorXd>(pv.values.data(), n);
        const double phi = x.dot(v) / n;
        out += strength * phi * x;
        return out;
    };

    Eigen::VectorXd v = x;  // mean-zero start along the expected eigendirection
    v /= v.norm();
    double lambda = 0.0;
    for (int iter = 0; iter < 10'000; ++iter) {
        Eigen::VectorXd w = apply_q(v);
        w.array() -= w.mean();  // stay on the mean-zero subspace
        const double next = v.dot(w);
        const double wnorm = w.norm();
        if (wnorm == 0.0) throw NoConvergence("power iteration collapsed to zero");
        w /= wnorm;
        if (std::fabs(next - lambda) < 1e-13 * std::max(1.0, std::fabs(next))) {
            return {next, std::vector<double>(w.data(), w.data() + n)};
        }
        lambda = next;
        v = std::move(w);
    }
    throw NoConvergence("power iteration did not settle in 10^4 steps");
}

double linearization_eigenvalue(double strength, int n_bins) {
    return linearization_eigenpair(strength, n_bins).value;
}

namespace {

std::vector<double> grid_derivative(const std::vector<double>& f, int n) {
    const double h = 1.0 / n;
    std::vector<double> d(f.size());
    const std::size_t m = f.size();
    d[0] = (f[1] - f[0]) / h;
    d[m - 1] = (f[m - 1] - f[m - 2]) / h;
    for (std::size_t i = 1; i + 1 < m; ++i) d[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
    return d;
}

} // namespace

double gateaux_residual(const Feedback& f, const GridDensity& u, const GridDensity& g,
                        double tau) {
    const int n = u.n_bins();
    if (g.n_bins() != n) throw ShapeMismatch("perturbation resolution does not match density");
    if (!(tau > 0.0)) throw std::invalid_argument("step must be positive");

    const double phi_u = grid_field(u);
    const double r = g_eval(f, phi_u);
    const UlamMatrix pr = build_ulam(r, n);

    // finite-difference side
    GridDensity u_plus{u.values};
    for (int i = 0; i < n; ++i) u_plus.values[static_cast<std::size_t>(i)] += tau * g.values[static_cast<std::size_t>(i)];
    const double r_plus = g_eval(f, grid_field(u_plus));
    const GridDensity fd_num = apply_pfo(build_ulam(r_plus, n), u_plus);
    const GridDensity base = apply_pfo(pr, u);

    // derivative-formula side
    std::vector<double> uv(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double x = bin_midpoint(i, n);
        uv[static_cast<std::size_t>(i)] = u.values[static_cast<std::size_t>(i)] * (4.0 * x * x - 1.0) / (4.0 - r * r);
    }
    const GridDensity w_r = apply_pfo(pr, GridDensity{grid_derivative(uv, n)});
    const GridDensity pg = apply_pfo(pr, g);
    const double scale = g_prime(f, phi_u) * grid_field(g);

    double residual = 0.0;
    for (int i = 0; i < n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        const double fd = (fd_num.values[k] - base.values[k]) / tau;
        const double formula = pg.values[k] + w_r.values[k] * scale;
        residual += std::fabs(fd - formula);
    }
    return residual / n;
}

} // namespace gcm
