#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <span>
#include <type_traits>
#include <utility>
#include <vector>

#include "ctxforge/errors.hpp"

namespace ctxforge {

using Complex = std::complex<double>;

namespace detail {
template <typename T> struct is_complex : std::false_type {};
template <typename T> struct is_complex<std::complex<T>> : std::true_type {};

template <typename T> T conj_of(const T& x) {
    if constexpr (is_complex<T>::value) return std::conj(x);
    else return x;
}
template <typename T> double real_of(const T& x) {
    if constexpr (is_complex<T>::value) return x.real();
    else return static_cast<double>(x);
}
}  // namespace detail

// Dense row-major matrix.
template <typename T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T{}) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T{1};
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool square() const noexcept { return rows_ == cols_; }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<T> data() noexcept { return data_; }
    std::span<const T> data() const noexcept { return data_; }

    Matrix adjoint() const {
        Matrix out(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) out(j, i) = detail::conj_of((*this)(i, j));
        return out;
    }

    T trace() const {
        T t{};
        for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
        return t;
    }

    Matrix& operator+=(const Matrix& o) {
        check_same(o);
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
        return *this;
    }
    Matrix& operator-=(const Matrix& o) {
        check_same(o);
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
        return *this;
    }
    Matrix& operator*=(const T& s) {
        for (auto& x : data_) x *= s;
        return *this;
    }

    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator*(Matrix a, const T& s) { return a *= s; }
    friend Matrix operator*(const T& s, Matrix a) { return a *= s; }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) throw DimensionMismatch("matrix product shape mismatch");
        Matrix out(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const T aik = a(i, k);
                if (aik == T{}) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
            }
        return out;
    }

    double max_abs() const {
        double m = 0.0;
        for (const auto& x : data_) m = std::max(m, static_cast<double>(std::abs(x)));
        return m;
    }

private:
    void check_same(const Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionMismatch("matrix shape mismatch");
    }

    std::size_t rows_ = 0, cols_ = 0;
    std::vector<T> data_;
};

using CMatrix = Matrix<Complex>;
using RMatrix = Matrix<double>;

template <typename T>
Matrix<T> kron(const Matrix<T>& a, const Matrix<T>& b) {
    Matrix<T> out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
    return out;
}

template <typename T>
double hermiticity_defect(const Matrix<T>& m) {
    if (!m.square()) return INFINITY;
    double d = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = i; j < m.cols(); ++j) d = std::max(d, std::abs(m(i, j) - detail::conj_of(m(j, i))));
    return d;
}

template <typename T>
struct EigenSystem {
    std::vector<double> values;  // ascending
    Matrix<T> vectors;           // column k pairs with values[k]
};

// Cyclic Jacobi sweeps for Hermitian (or real symmetric) matrices. Each
// rotation removes the phase of the pivot with a diagonal unitary and then
// applies the real symmetric Jacobi rotation.
template <typename T>
EigenSystem<T> eigh(Matrix<T> a, double tol = 1e-12, int max_sweeps = 100) {
    if (!a.square()) throw DimensionMismatch("eigh requires a square matrix");
    const std::size_t n = a.rows();
    Matrix<T> v = Matrix<T>::identity(n);
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) scale += std::norm(a(i, j));
    scale = std::sqrt(scale);
    const double threshold = tol * std::max(scale, 1e-300);

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += std::norm(a(p, q));
        if (std::sqrt(2.0 * off) <= threshold) break;

        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const T apq = a(p, q);
                const double beta = std::abs(apq);
                if (beta <= 1e-300) continue;
                const T phase = apq / beta;  // e^{i phi}
                const T phase_c = detail::conj_of(phase);
                const double app = detail::real_of(a(p, p));
                const double aqq = detail::real_of(a(q, q));
                const double theta = (aqq - app) / (2.0 * beta);
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                // G = [[c, s], [-s e^{-i phi}, c e^{-i phi}]] on (p, q).
                for (std::size_t k = 0; k < n; ++k) {
                    const T akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * phase_c * akq;
                    a(k, q) = s * akp + c * phase_c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const T apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * phase * aqk;
                    a(q, k) = s * apk + c * phase * aqk;
                }
                a(p, q) = T{};
                a(q, p) = T{};
                a(p, p) = T{detail::real_of(a(p, p))};
                a(q, q) = T{detail::real_of(a(q, q))};
                for (std::size_t k = 0; k < n; ++k) {
                    const T vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * phase_c * vkq;
                    v(k, q) = s * vkp + c * phase_c * vkq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return detail::real_of(a(x, x)) < detail::real_of(a(y, y)); });
    EigenSystem<T> out;
    out.values.resize(n);
    out.vectors = Matrix<T>(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = detail::real_of(a(order[k], order[k]));
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
    }
    return out;
}

template <typename T>
double min_eigenvalue(const Matrix<T>& m) {
    if (hermiticity_defect(m) > 1e-12 * std::max(1.0, m.max_abs())) throw NotHermitian("matrix is not Hermitian");
    if (m.rows() == 0) throw DimensionMismatch("empty matrix");
    return eigh(m).values.front();
}

template <typename T>
double max_eigenvalue(const Matrix<T>& m) {
    if (hermiticity_defect(m) > 1e-12 * std::max(1.0, m.max_abs())) throw NotHermitian("matrix is not Hermitian");
    if (m.rows() == 0) throw DimensionMismatch("empty matrix");
    return eigh(m).values.back();
}

// ---------------------------------------------------------------------------
// Quantum objects

inline Complex inner(std::span<const Complex> a, std::span<const Complex> b) {
    if (a.size() != b.size()) throw DimensionMismatch("inner product of vectors with different dimensions");
    Complex s{};
    for (std::size_t k = 0; k < a.size(); ++k) s += std::conj(a[k]) * b[k];
    return s;
}

inline double norm_of(std::span<const Complex> a) { return std::sqrt(std::abs(inner(a, a))); }

class Ket {
public:
    static constexpr double kNormTolerance = 1e-9;

    Ket() = default;
    explicit Ket(std::vector<Complex> amplitudes) : amp_(std::move(amplitudes)) {
        if (amp_.empty()) throw DimensionMismatch("ket must have positive dimension");
        if (std::fabs(norm_of(amp_) - 1.0) > kNormTolerance) throw NotNormalized("ket is not normalized");
    }

    static Ket normalized(std::vector<Complex> amplitudes) {
        const double n = norm_of(amplitudes);
        if (!(n > 0.0) || !std::isfinite(n)) throw NotNormalized("cannot normalize a zero or non-finite vector");
        for (auto& x : amplitudes) x /= n;
        return Ket(std::move(amplitudes));
    }

    std::size_t dim() const noexcept { return amp_.size(); }
    const std::vector<Complex>& amplitudes() const noexcept { return amp_; }
    const Complex& operator[](std::size_t i) const { return amp_[i]; }

    Ket conjugate() const {
        Ket k = *this;
        for (auto& x : k.amp_) x = std::conj(x);
        return k;
    }

private:
    std::vector<Complex> amp_;
};

inline Complex inner(const Ket& a, const Ket& b) { return inner(a.amplitudes(), b.amplitudes()); }
inline double overlap(const Ket& a, const Ket& b) { return std::abs(inner(a, b)); }

inline CMatrix outer(const Ket& a, const Ket& b) {
    CMatrix m(a.dim(), b.dim());
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < b.dim(); ++j) m(i, j) = a[i] * std::conj(b[j]);
    return m;
}

class Projector {
public:
    static Projector from_matrix(CMatrix m) {
        if (hermiticity_defect(m) > 1e-12) throw NotHermitian("projector must be Hermitian");
        CMatrix sq = m * m;
        if ((sq - m).max_abs() > 1e-9) throw Error("matrix is not idempotent");
        const double tr = m.trace().real();
        const long rank = std::lround(tr);
        if (std::fabs(tr - static_cast<double>(rank)) > 1e-9) throw Error("projector trace is not an integer");
        Projector p;
        p.m_ = std::move(m);
        p.rank_ = static_cast<int>(rank);
        return p;
    }

    std::size_t dim() const noexcept { return m_.rows(); }
    int rank() const noexcept { return rank_; }
    const CMatrix& matrix() const noexcept { return m_; }

    Projector complement() const {
        Projector p;
        p.m_ = CMatrix::identity(dim()) - m_;
        p.rank_ = static_cast<int>(dim()) - rank_;
        return p;
    }

private:
    friend Projector projector_from_ket(const Ket& v);
    CMatrix m_;
    int rank_ = 0;
};

inline Projector projector_from_ket(const Ket& v) {
    if (std::fabs(norm_of(v.amplitudes()) - 1.0) > Ket::kNormTolerance) throw NotNormalized("ket is not normalized");
    Projector p;
    p.m_ = outer(v, v);
    p.rank_ = 1;
    return p;
}

class DensityMatrix {
public:
    DensityMatrix() = default;
    explicit DensityMatrix(CMatrix m) : m_(std::move(m)) {
        if (!m_.square() || m_.rows() == 0) throw DimensionMismatch("density matrix must be square");
        if (hermiticity_defect(m_) > 1e-12) throw NotHermitian("density matrix must be Hermitian");
        if (std::fabs(m_.trace().real() - 1.0) > 1e-9) throw NotDensityMatrix("density matrix trace must be 1");
        if (eigh(m_).values.front() < -1e-9) throw NotDensityMatrix("density matrix must be positive semidefinite");
    }

    static DensityMatrix pure(const Ket& psi) { return DensityMatrix(outer(psi, psi)); }
    static DensityMatrix maximally_mixed(std::size_t d) {
        CMatrix m = CMatrix::identity(d);
        m *= Complex(1.0 / static_cast<double>(d), 0.0);
        return DensityMatrix(std::move(m));
    }

    std::size_t dim() const noexcept { return m_.rows(); }
    const CMatrix& matrix() const noexcept { return m_; }

private:
    CMatrix m_;
};

// Re Tr(rho * X)
inline double expectation(const CMatrix& rho, const CMatrix& x) {
    if (rho.rows() != x.rows() || !x.square() || !rho.square()) throw DimensionMismatch("expectation dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < rho.rows(); ++i)
        for (std::size_t j = 0; j < rho.cols(); ++j) s += (rho(i, j) * x(j, i)).real();
    return s;
}

struct LudersOutcome {
    DensityMatrix state;
    double probability;
};

inline LudersOutcome luders_update(const DensityMatrix& rho, const Projector& p, int outcome) {
    if (rho.dim() != p.dim()) throw DimensionMismatch("state and projector dimensions differ");
    if (outcome != 0 && outcome != 1) throw Error("outcome must be 0 or 1");
    const CMatrix q = outcome == 1 ? p.matrix() : p.complement().matrix();
    const double prob = expectation(rho.matrix(), q);
    if (prob < 1e-12) throw ZeroProbabilityBranch("requested outcome has zero probability");
    CMatrix post = q * rho.matrix() * q;
    post *= Complex(1.0 / prob, 0.0);
    // Symmetrize away rounding so the constructor's Hermiticity check holds.
    CMatrix sym = post + post.adjoint();
    sym *= Complex(0.5, 0.0);
    return {DensityMatrix(std::move(sym)), prob};
}

inline Ket maximally_entangled(std::size_t d) {
    if (d < 2) throw DimensionMismatch("maximally entangled state needs d >= 2");
    std::vector<Complex> amp(d * d, Complex{});
    const double a = 1.0 / std::sqrt(static_cast<double>(d));
    for (std::size_t k = 0; k < d; ++k) amp[k * d + k] = a;
    return Ket(std::move(amp));
}

// Square complex system solve by Gaussian elimination with partial pivoting.
inline CMatrix inverse(const CMatrix& m) {
    if (!m.square()) throw DimensionMismatch("inverse of non-square matrix");
    const std::size_t n = m.rows();
    CMatrix a = m, inv = CMatrix::identity(n);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
        if (std::abs(a(piv, col)) < 1e-13) throw Error("matrix is singular");
        for (std::size_t j = 0; j < n; ++j) {
            std::swap(a(col, j), a(piv, j));
            std::swap(inv(col, j), inv(piv, j));
        }
        const Complex d = a(col, col);
        for (std::size_t j = 0; j < n; ++j) {
            a(col, j) /= d;
            inv(col, j) /= d;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const Complex f = a(r, col);
            if (f == Complex{}) continue;
            for (std::size_t j = 0; j < n; ++j) {
                a(r, j) -= f * a(col, j);
                inv(r, j) -= f * inv(col, j);
            }
        }
    }
    return inv;
}

}  // namespace ctxforge
