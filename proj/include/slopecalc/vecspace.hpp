#pragma once

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace slopecalc {

/// Dense real vector of fixed dimension. Entries must be finite; construction
/// rejects NaN/Inf so downstream arithmetic can assume clean values.
class Vector {
public:
    explicit Vector(std::vector<double> entries);
    Vector(std::initializer_list<double> entries);
    static Vector zeros(int dim);
    static Vector unit(int dim, int k);

    int dim() const { return static_cast<int>(entries_.size()); }
    double operator[](int i) const { return entries_[static_cast<std::size_t>(i)]; }
    double& operator[](int i) { return entries_[static_cast<std::size_t>(i)]; }
    const std::vector<double>& entries() const { return entries_; }

private:
    std::vector<double> entries_;
};

Vector operator+(const Vector& a, const Vector& b);
Vector operator-(const Vector& a, const Vector& b);
Vector operator*(double s, const Vector& a);
Vector operator-(const Vector& a);
bool operator==(const Vector& a, const Vector& b);

double dot(const Vector& a, const Vector& b);
double norm2(const Vector& a);
double norm_inf(const Vector& a);
Vector concat(const Vector& a, const Vector& b);
Vector slice(const Vector& a, int lo, int hi);  // half-open [lo, hi)

/// Dense linear operator R^n -> R^m, row-major storage.
class LinOp {
public:
    LinOp(int rows, int cols);  // zero operator
    LinOp(int rows, int cols, std::vector<double> entries);
    static LinOp identity(int n);
    static LinOp from_rows(std::initializer_list<std::initializer_list<double>> rows);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    double operator()(int i, int j) const { return entries_[idx(i, j)]; }
    double& operator()(int i, int j) { return entries_[idx(i, j)]; }
    const std::vector<double>& entries() const { return entries_; }

    Vector apply(const Vector& x) const;
    Vector column(int j) const;
    Vector row(int i) const;

private:
    std::size_t idx(int i, int j) const {
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(cols_) +
               static_cast<std::size_t>(j);
    }
    int rows_, cols_;
    std::vector<double> entries_;
};

LinOp operator+(const LinOp& a, const LinOp& b);
LinOp operator-(const LinOp& a, const LinOp& b);
LinOp operator*(double s, const LinOp& a);
LinOp operator*(const LinOp& a, const LinOp& b);
LinOp transpose(const LinOp& a);
LinOp outer(const Vector& u, const Vector& v);  // u v^T
LinOp block_columns(const LinOp& a, int lo, int hi);
double frobenius_norm(const LinOp& a);
double max_abs(const LinOp& a);

Vector flatten(const LinOp& a);                       // row-major vec
LinOp unflatten(const Vector& v, int rows, int cols);

/// Norm specifications. PNorm is the weighted p-norm (sum_i w_i |x_i|^p)^(1/p)
/// with 1 < p < inf and positive weights; InnerProduct is the norm induced by
/// a symmetric positive definite Gram matrix.
struct Euclidean {};
struct PNorm {
    double p;
    std::vector<double> weights;
};
struct InnerProduct {
    LinOp gram;
};
using NormSpec = std::variant<Euclidean, PNorm, InnerProduct>;

PNorm make_pnorm(double p, std::vector<double> weights);
InnerProduct make_inner_product(LinOp gram);  // checks symmetry (1e-12) and positive definiteness
int spec_dim(const NormSpec& spec);           // 0 = any dimension
void check_spec(const NormSpec& spec, int dim);

double norm(const Vector& x, const NormSpec& spec);

/// Axis-aligned box domain.
struct Box {
    Vector lo, hi;
    Box(Vector lo_, Vector hi_);
    static Box centered(int dim, double half_width);
    int dim() const { return lo.dim(); }
    bool contains(const Vector& x, double tol = 1e-12) const;
    Vector center() const;
    double min_margin(const Vector& x) const;  // distance to nearest face, negative outside
    double max_width() const;
};

/// Bounded bilinear map b : R^{dim1} x R^{dim2} -> R^{dim_out} with
/// ||b(y1,y2)|| <= bound * ||y1|| * ||y2||.
struct BilinearMap {
    int dim1, dim2, dim_out;
    double bound;
    std::function<Vector(const Vector&, const Vector&)> map;
};

Vector apply_bilinear(const BilinearMap& b, const Vector& y1, const Vector& y2);

struct OperatorNormOptions {
    int n_dirs = 256;
    std::uint64_t seed = 0;
    double rel_tol = 1e-10;
    int max_iter = 10000;
};

struct OperatorNormResult {
    double value = 0.0;
    bool estimate = false;  // true when the value is a sampled lower bound
    int iterations = 0;
};

/// Largest singular value via power iteration on A^T A. Throws on
/// non-convergence; never returns a silently unconverged value.
double spectral_norm(const LinOp& a, double rel_tol = 1e-10, int max_iter = 10000);

/// Induced operator norm. Exact (power iteration) when both specs are
/// Euclidean; otherwise a sampled lower-bound estimate over n_dirs random unit
/// directions plus all coordinate directions, flagged as an estimate.
OperatorNormResult op_norm(const LinOp& a, const NormSpec& in_spec, const NormSpec& out_spec,
                           const OperatorNormOptions& opts = {});

/// LU with partial pivoting. lu_solve solves A X = B; throws on singular A.
LinOp lu_solve(const LinOp& a, const LinOp& b);
Vector lu_solve(const LinOp& a, const Vector& b);
LinOp inverse(const LinOp& a);

/// kappa_2 estimate as the ratio of extreme singular value estimates,
/// computed as spectral_norm(A) * spectral_norm(A^{-1}).
double condition_estimate(const LinOp& a);

}  // namespace slopecalc
