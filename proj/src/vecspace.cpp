#include "slopecalc/vecspace.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "slopecalc/rng.hpp"

namespace slopecalc {

namespace {

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

void require_finite(const std::vector<double>& v, const char* what) {
    for (double x : v) {
        if (!std::isfinite(x)) throw std::invalid_argument(std::string(what) + ": non-finite entry");
    }
}

}  // namespace

Vector::Vector(std::vector<double> entries) : entries_(std::move(entries)) {
    require(!entries_.empty(), "Vector: dimension must be >= 1");
    require_finite(entries_, "Vector");
}

Vector::Vector(std::initializer_list<double> entries) : Vector(std::vector<double>(entries)) {}

Vector Vector::zeros(int dim) {
    require(dim >= 1, "Vector::zeros: dimension must be >= 1");
    return Vector(std::vector<double>(static_cast<std::size_t>(dim), 0.0));
}

Vector Vector::unit(int dim, int k) {
    Vector e = zeros(dim);
    e[k] = 1.0;
    return e;
}

Vector operator+(const Vector& a, const Vector& b) {
    require(a.dim() == b.dim(), "Vector +: dimension mismatch");
    std::vector<double> r(a.entries());
    for (int i = 0; i < a.dim(); ++i) r[static_cast<std::size_t>(i)] += b[i];
    return Vector(std::move(r));
}

Vector operator-(const Vector& a, const Vector& b) {
    require(a.dim() == b.dim(), "Vector -: dimension mismatch");
    std::vector<double> r(a.entries());
    for (int i = 0; i < a.dim(); ++i) r[static_cast<std::size_t>(i)] -= b[i];
    return Vector(std::move(r));
}

Vector operator*(double s, const Vector& a) {
    std::vector<double> r(a.entries());
    for (double& x : r) x *= s;
    return Vector(std::move(r));
}

Vector operator-(const Vector& a) { return -1.0 * a; }

bool operator==(const Vector& a, const Vector& b) {
    return a.dim() == b.dim() && a.entries() == b.entries();
}

double dot(const Vector& a, const Vector& b) {
    require(a.dim() == b.dim(), "dot: dimension mismatch");
    double s = 0.0;
    for (int i = 0; i < a.dim(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(const Vector& a) { return std::sqrt(dot(a, a)); }

double norm_inf(const Vector& a) {
    double m = 0.0;
    for (int i = 0; i < a.dim(); ++i) m = std::max(m, std::fabs(a[i]));
    return m;
}

Vector concat(const Vector& a, const Vector& b) {
    std::vector<double> r(a.entries());
    r.insert(r.end(), b.entries().begin(), b.entries().end());
    return Vector(std::move(r));
}

Vector slice(const Vector& a, int lo, int hi) {
    require(0 <= lo && lo < hi && hi <= a.dim(), "slice: bad range");
    return Vector(std::vector<double>(a.entries().begin() + lo, a.entries().begin() + hi));
}

LinOp::LinOp(int rows, int cols)
    : rows_(rows), cols_(cols),
      entries_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), 0.0) {
    require(rows >= 1 && cols >= 1, "LinOp: shape must be positive");
}

LinOp::LinOp(int rows, int cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    require(rows >= 1 && cols >= 1, "LinOp: shape must be positive");
    require(entries_.size() == static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols),
            "LinOp: entry count inconsistent with shape");
    require_finite(entries_, "LinOp");
}

LinOp LinOp::identity(int n) {
    LinOp a(n, n);
    for (int i = 0; i < n; ++i) a(i, i) = 1.0;
    return a;
}

LinOp LinOp::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    const int m = static_cast<int>(rows.size());
    require(m >= 1, "LinOp::from_rows: empty");
    const int n = static_cast<int>(rows.begin()->size());
    std::vector<double> e;
    e.reserve(static_cast<std::size_t>(m) * static_cast<std::size_t>(n));
    for (const auto& r : rows) {
        require(static_cast<int>(r.size()) == n, "LinOp::from_rows: ragged rows");
        e.insert(e.end(), r.begin(), r.end());
    }
    return LinOp(m, n, std::move(e));
}

Vector LinOp::apply(const Vector& x) const {
    require(x.dim() == cols_, "LinOp::apply: dimension mismatch");
    std::vector<double> r(static_cast<std::size_t>(rows_), 0.0);
    for (int i = 0; i < rows_; ++i) {
        double s = 0.0;
        for (int j = 0; j < cols_; ++j) s += (*this)(i, j) * x[j];
        r[static_cast<std::size_t>(i)] = s;
    }
    return Vector(std::move(r));
}

Vector LinOp::column(int j) const {
    std::vector<double> c(static_cast<std::size_t>(rows_));
    for (int i = 0; i < rows_; ++i) c[static_cast<std::size_t>(i)] = (*this)(i, j);
    return Vector(std::move(c));
}

Vector LinOp::row(int i) const {
    std::vector<double> r(static_cast<std::size_t>(cols_));
    for (int j = 0; j < cols_; ++j) r[static_cast<std::size_t>(j)] = (*this)(i, j);
    return Vector(std::move(r));
}

LinOp operator+(const LinOp& a, const LinOp& b) {
    require(a.rows() == b.rows() && a.cols() == b.cols(), "LinOp +: shape mismatch");
    std::vector<double> r(a.entries());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += b.entries()[i];
    return LinOp(a.rows(), a.cols(), std::move(r));
}

LinOp operator-(const LinOp& a, const LinOp& b) {
    require(a.rows() == b.rows() && a.cols() == b.cols(), "LinOp -: shape mismatch");
    std::vector<double> r(a.entries());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b.entries()[i];
    return LinOp(a.rows(), a.cols(), std::move(r));
}

LinOp operator*(double s, const LinOp& a) {
    std::vector<double> r(a.entries());
    for (double& x : r) x *= s;
    return LinOp(a.rows(), a.cols(), std::move(r));
}

LinOp operator*(const LinOp& a, const LinOp& b) {
    require(a.cols() == b.rows(), "LinOp *: shape mismatch");
    LinOp c(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

LinOp transpose(const LinOp& a) {
    LinOp t(a.cols(), a.rows());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
    return t;
}

LinOp outer(const Vector& u, const Vector& v) {
    LinOp a(u.dim(), v.dim());
    for (int i = 0; i < u.dim(); ++i)
        for (int j = 0; j < v.dim(); ++j) a(i, j) = u[i] * v[j];
    return a;
}

LinOp block_columns(const LinOp& a, int lo, int hi) {
    require(0 <= lo && lo < hi && hi <= a.cols(), "block_columns: bad range");
    LinOp b(a.rows(), hi - lo);
    for (int i = 0; i < a.rows(); ++i)
        for (int j = lo; j < hi; ++j) b(i, j - lo) = a(i, j);
    return b;
}

double frobenius_norm(const LinOp& a) {
    double s = 0.0;
    for (double x : a.entries()) s += x * x;
    return std::sqrt(s);
}

double max_abs(const LinOp& a) {
    double m = 0.0;
    for (double x : a.entries()) m = std::max(m, std::fabs(x));
    return m;
}

Vector flatten(const LinOp& a) { return Vector(a.entries()); }

LinOp unflatten(const Vector& v, int rows, int cols) {
    return LinOp(rows, cols, v.entries());
}

namespace {

// Cholesky factorization attempt; success certifies positive definiteness.
bool cholesky_ok(const LinOp& g) {
    const int n = g.rows();
    LinOp l(n, n);
    for (int j = 0; j < n; ++j) {
        double d = g(j, j);
        for (int k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
        if (!(d > 0.0)) return false;
        l(j, j) = std::sqrt(d);
        for (int i = j + 1; i < n; ++i) {
            double s = g(i, j);
            for (int k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            l(i, j) = s / l(j, j);
        }
    }
    return true;
}

}  // namespace

PNorm make_pnorm(double p, std::vector<double> weights) {
    require(std::isfinite(p) && p > 1.0, "PNorm: requires 1 < p < inf");
    require(!weights.empty(), "PNorm: weights empty");
    for (double w : weights) require(std::isfinite(w) && w > 0.0, "PNorm: weights must be positive");
    return PNorm{p, std::move(weights)};
}

InnerProduct make_inner_product(LinOp gram) {
    require(gram.rows() == gram.cols(), "InnerProduct: Gram matrix must be square");
    const double scale = std::max(1.0, max_abs(gram));
    for (int i = 0; i < gram.rows(); ++i)
        for (int j = i + 1; j < gram.cols(); ++j)
            require(std::fabs(gram(i, j) - gram(j, i)) <= 1e-12 * scale,
                    "InnerProduct: Gram matrix not symmetric");
    require(cholesky_ok(gram), "InnerProduct: Gram matrix not positive definite");
    return InnerProduct{std::move(gram)};
}

int spec_dim(const NormSpec& spec) {
    if (const auto* p = std::get_if<PNorm>(&spec)) return static_cast<int>(p->weights.size());
    if (const auto* ip = std::get_if<InnerProduct>(&spec)) return ip->gram.rows();
    return 0;
}

void check_spec(const NormSpec& spec, int dim) {
    const int d = spec_dim(spec);
    require(d == 0 || d == dim, "NormSpec: dimension mismatch");
}

double norm(const Vector& x, const NormSpec& spec) {
    check_spec(spec, x.dim());
    if (std::holds_alternative<Euclidean>(spec)) return norm2(x);
    if (const auto* p = std::get_if<PNorm>(&spec)) {
        double s = 0.0;
        for (int i = 0; i < x.dim(); ++i)
            s += p->weights[static_cast<std::size_t>(i)] * std::pow(std::fabs(x[i]), p->p);
        return std::pow(s, 1.0 / p->p);
    }
    const auto& g = std::get<InnerProduct>(spec).gram;
    return std::sqrt(std::max(0.0, dot(x, g.apply(x))));
}

Box::Box(Vector lo_, Vector hi_) : lo(std::move(lo_)), hi(std::move(hi_)) {
    require(lo.dim() == hi.dim(), "Box: dimension mismatch");
    for (int i = 0; i < lo.dim(); ++i) require(lo[i] < hi[i], "Box: requires lo < hi");
}

Box Box::centered(int dim, double half_width) {
    std::vector<double> l(static_cast<std::size_t>(dim), -half_width);
    std::vector<double> h(static_cast<std::size_t>(dim), half_width);
    return Box(Vector(std::move(l)), Vector(std::move(h)));
}

bool Box::contains(const Vector& x, double tol) const {
    if (x.dim() != dim()) return false;
    for (int i = 0; i < dim(); ++i) {
        const double slack = tol * (1.0 + hi[i] - lo[i]);
        if (x[i] < lo[i] - slack || x[i] > hi[i] + slack) return false;
    }
    return true;
}

Vector Box::center() const { return 0.5 * (lo + hi); }

double Box::min_margin(const Vector& x) const {
    double m = std::numeric_limits<double>::infinity();
    for (int i = 0; i < dim(); ++i) m = std::min({m, x[i] - lo[i], hi[i] - x[i]});
    return m;
}

double Box::max_width() const {
    double w = 0.0;
    for (int i = 0; i < dim(); ++i) w = std::max(w, hi[i] - lo[i]);
    return w;
}

Vector apply_bilinear(const BilinearMap& b, const Vector& y1, const Vector& y2) {
    require(y1.dim() == b.dim1 && y2.dim() == b.dim2, "apply_bilinear: dimension mismatch");
    Vector r = b.map(y1, y2);
    require(r.dim() == b.dim_out, "apply_bilinear: map produced wrong output dimension");
    return r;
}

double spectral_norm(const LinOp& a, double rel_tol, int max_iter) {
    const int n = a.cols();
    bool all_zero = true;
    for (double x : a.entries())
        if (x != 0.0) { all_zero = false; break; }
    if (all_zero) return 0.0;

    const LinOp at = transpose(a);
    // Deterministic ramp start; restarts from coordinate vectors if the
    // iterate lands in the kernel of A.
    auto iterate = [&](Vector v) -> double {
        double prev = -1.0;
        for (int it = 0; it < max_iter; ++it) {
            Vector av = a.apply(v);
            const double sigma = norm2(av);
            if (sigma == 0.0) return -1.0;  // kernel hit, caller restarts
            if (prev >= 0.0 && std::fabs(sigma - prev) <= rel_tol * std::max(sigma, 1e-300))
                return sigma;
            prev = sigma;
            Vector w = at.apply(av);
            const double wn = norm2(w);
            if (wn == 0.0) return sigma;  // A^T A v = 0 while A v != 0 cannot occur exactly
            v = (1.0 / wn) * w;
        }
        throw std::runtime_error("spectral_norm: power iteration did not converge within " +
                                 std::to_string(max_iter) + " iterations");
    };

    std::vector<double> start(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) start[static_cast<std::size_t>(i)] = 1.0 + static_cast<double>(i) / n;
    Vector v(std::move(start));
    double sigma = iterate((1.0 / norm2(v)) * v);
    for (int k = 0; k < n && sigma < 0.0; ++k) sigma = iterate(Vector::unit(n, k));
    if (sigma < 0.0) return 0.0;
    return sigma;
}

OperatorNormResult op_norm(const LinOp& a, const NormSpec& in_spec, const NormSpec& out_spec,
                           const OperatorNormOptions& opts) {
    check_spec(in_spec, a.cols());
    check_spec(out_spec, a.rows());
    OperatorNormResult res;
    if (std::holds_alternative<Euclidean>(in_spec) && std::holds_alternative<Euclidean>(out_spec)) {
        res.value = spectral_norm(a, opts.rel_tol, opts.max_iter);
        res.estimate = false;
        return res;
    }
    // Sampled lower bound: all coordinate directions plus n_dirs random unit
    // directions. Always flagged as an estimate.
    Rng rng(opts.seed);
    double best = 0.0;
    auto consider = [&](const Vector& x) {
        const double nx = norm(x, in_spec);
        if (nx <= 0.0) return;
        best = std::max(best, norm(a.apply(x), out_spec) / nx);
    };
    for (int k = 0; k < a.cols(); ++k) consider(Vector::unit(a.cols(), k));
    for (int d = 0; d < opts.n_dirs; ++d) consider(rng.unit_vector(a.cols()));
    res.value = best;
    res.estimate = true;
    return res;
}

LinOp lu_solve(const LinOp& a, const LinOp& b) {
    require(a.rows() == a.cols(), "lu_solve: A must be square");
    require(a.rows() == b.rows(), "lu_solve: shape mismatch");
    const int n = a.rows();
    LinOp lu = a;
    LinOp x = b;
    std::vector<int> piv(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) piv[static_cast<std::size_t>(i)] = i;

    for (int k = 0; k < n; ++k) {
        int p = k;
        double pm = std::fabs(lu(k, k));
        for (int i = k + 1; i < n; ++i) {
            const double m = std::fabs(lu(i, k));
            if (m > pm) { pm = m; p = i; }
        }
        if (pm == 0.0) throw std::domain_error("lu_solve: singular matrix");
        if (p != k) {
            for (int j = 0; j < n; ++j) std::swap(lu(k, j), lu(p, j));
            for (int j = 0; j < x.cols(); ++j) std::swap(x(k, j), x(p, j));
        }
        for (int i = k + 1; i < n; ++i) {
            const double f = lu(i, k) / lu(k, k);
            lu(i, k) = f;
            for (int j = k + 1; j < n; ++j) lu(i, j) -= f * lu(k, j);
            for (int j = 0; j < x.cols(); ++j) x(i, j) -= f * x(k, j);
        }
    }
    for (int k = n - 1; k >= 0; --k) {
        for (int j = 0; j < x.cols(); ++j) {
            double s = x(k, j);
            for (int i = k + 1; i < n; ++i) s -= lu(k, i) * x(i, j);
            x(k, j) = s / lu(k, k);
        }
    }
    return x;
}

Vector lu_solve(const LinOp& a, const Vector& b) {
    LinOp rhs(b.dim(), 1, b.entries());
    return lu_solve(a, rhs).column(0);
}

LinOp inverse(const LinOp& a) {
    require(a.rows() == a.cols(), "inverse: A must be square");
    return lu_solve(a, LinOp::identity(a.rows()));
}

double condition_estimate(const LinOp& a) {
    return spectral_norm(a) * spectral_norm(inverse(a));
}

}  // namespace slopecalc
