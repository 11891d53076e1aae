#pragma once

// Exact linear algebra over F_p and Z/p^k.
//
// FpMatrix stores residues mod a prime p; for p = 2 rows are bit-packed into
// 64-bit words.  EchelonAccumulator keeps a fully reduced echelon basis so
// that rows can be streamed in one at a time without materializing the
// matrix they come from.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hsprop/errors.hpp"

namespace hsprop {

using Residue = std::uint32_t;
using Vec = std::vector<Residue>;

namespace modular {

inline Residue add(Residue a, Residue b, Residue m) {
    std::uint64_t s = std::uint64_t(a) + b;
    return Residue(s >= m ? s - m : s);
}
inline Residue sub(Residue a, Residue b, Residue m) { return a >= b ? a - b : Residue(a + (m - b)); }
inline Residue mul(Residue a, Residue b, Residue m) { return Residue(std::uint64_t(a) * b % m); }
inline Residue neg(Residue a, Residue m) { return a == 0 ? 0 : m - a; }

inline Residue reduce(long long v, Residue m) {
    long long r = v % static_cast<long long>(m);
    return Residue(r < 0 ? r + m : r);
}

/// Inverse of a unit modulo m (m need not be prime).
inline Residue inverse(Residue a, Residue m) {
    long long t = 0, new_t = 1;
    long long r = m, new_r = a % m;
    while (new_r != 0) {
        long long q = r / new_r;
        std::tie(t, new_t) = std::make_pair(new_t, t - q * new_t);
        std::tie(r, new_r) = std::make_pair(new_r, r - q * new_r);
    }
    if (r != 1) throw PreconditionError("residue " + std::to_string(a) + " is not a unit mod " + std::to_string(m));
    return reduce(t, m);
}

inline Residue pow(Residue a, std::uint64_t e, Residue m) {
    Residue result = 1 % m;
    while (e) {
        if (e & 1) result = mul(result, a, m);
        a = mul(a, a, m);
        e >>= 1;
    }
    return result;
}

inline bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

inline std::uint64_t ipow(std::uint64_t b, unsigned e) {
    std::uint64_t r = 1;
    while (e--) r *= b;
    return r;
}

/// p-adic valuation of a residue modulo p^k; zero has valuation k.
inline int valuation(Residue a, Residue p, int k) {
    if (a == 0) return k;
    int v = 0;
    while (a % p == 0) {
        a /= p;
        ++v;
    }
    return v;
}

} // namespace modular

// ---------------------------------------------------------------------------
// FpMatrix

class FpMatrix {
public:
    FpMatrix() = default;
    FpMatrix(Residue p, std::size_t rows, std::size_t cols) : p_(p), rows_(rows), cols_(cols) {
        if (!modular::is_prime(p)) throw PreconditionError("FpMatrix modulus must be prime");
        if (p == 2) {
            words_ = (cols + 63) / 64;
            bits_.assign(rows * words_, 0);
        } else {
            data_.assign(rows * cols, 0);
        }
    }

    static FpMatrix identity(Residue p, std::size_t n) {
        FpMatrix m(p, n, n);
        for (std::size_t i = 0; i < n; ++i) m.set(i, i, 1);
        return m;
    }

    static FpMatrix from_rows(Residue p, const std::vector<Vec>& rows, std::size_t cols) {
        FpMatrix m(p, rows.size(), cols);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != cols) throw DimensionError("ragged matrix rows");
            for (std::size_t j = 0; j < cols; ++j) m.set(i, j, rows[i][j] % p);
        }
        return m;
    }

    Residue p() const { return p_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool packed() const { return p_ == 2; }

    Residue at(std::size_t i, std::size_t j) const {
        if (p_ == 2) return Residue((bits_[i * words_ + j / 64] >> (j % 64)) & 1u);
        return data_[i * cols_ + j];
    }

    void set(std::size_t i, std::size_t j, Residue v) {
        if (p_ == 2) {
            std::uint64_t& w = bits_[i * words_ + j / 64];
            std::uint64_t bit = std::uint64_t(1) << (j % 64);
            w = (v & 1u) ? (w | bit) : (w & ~bit);
        } else {
            data_[i * cols_ + j] = v % p_;
        }
    }

    Vec row(std::size_t i) const {
        Vec r(cols_);
        for (std::size_t j = 0; j < cols_; ++j) r[j] = at(i, j);
        return r;
    }

    Vec apply(std::span<const Residue> x) const {
        if (x.size() != cols_) throw DimensionError("matrix-vector length mismatch");
        Vec y(rows_, 0);
        for (std::size_t i = 0; i < rows_; ++i) {
            std::uint64_t acc = 0;
            for (std::size_t j = 0; j < cols_; ++j) acc += std::uint64_t(at(i, j)) * x[j];
            y[i] = Residue(acc % p_);
        }
        return y;
    }

    FpMatrix transpose() const {
        FpMatrix t(p_, cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t.set(j, i, at(i, j));
        return t;
    }

    friend FpMatrix operator*(const FpMatrix& a, const FpMatrix& b) {
        if (a.p_ != b.p_ || a.cols_ != b.rows_) throw DimensionError("matrix product shape mismatch");
        FpMatrix c(a.p_, a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t j = 0; j < b.cols_; ++j) {
                std::uint64_t acc = 0;
                for (std::size_t k = 0; k < a.cols_; ++k) acc += std::uint64_t(a.at(i, k)) * b.at(k, j);
                c.set(i, j, Residue(acc % a.p_));
            }
        return c;
    }

    friend bool operator==(const FpMatrix& a, const FpMatrix& b) {
        return a.p_ == b.p_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_ && a.bits_ == b.bits_;
    }

private:
    Residue p_ = 2;
    std::size_t rows_ = 0, cols_ = 0, words_ = 0;
    std::vector<Residue> data_;
    std::vector<std::uint64_t> bits_;
};

// ---------------------------------------------------------------------------
// EchelonAccumulator

struct SparseEntry {
    std::size_t col;
    Residue value;
};

/// Streaming row-echelon basis over F_p.  The basis is kept fully reduced:
/// every basis row is zero in every other row's pivot column, so absorbing
/// a row touches only the pivot columns where that row is nonzero.
class EchelonAccumulator {
public:
    EchelonAccumulator(Residue p, std::size_t cols)
        : p_(p), cols_(cols), words_((cols + 63) / 64), pivot_of_(cols, -1), scratch_(p == 2 ? 0 : cols),
          scratch_bits_(p == 2 ? words_ : 0) {
        if (!modular::is_prime(p)) throw PreconditionError("accumulator modulus must be prime");
    }

    Residue p() const { return p_; }
    std::size_t cols() const { return cols_; }
    std::size_t rank() const { return pivots_.size(); }
    const std::vector<std::size_t>& pivot_columns() const { return pivots_; }

    /// Returns true iff the row was independent of everything absorbed so far.
    bool absorb(std::span<const Residue> row) {
        if (row.size() != cols_)
            throw DimensionError("row length " + std::to_string(row.size()) + " != accumulator width " +
                                 std::to_string(cols_));
        if (p_ == 2) {
            std::fill(scratch_bits_.begin(), scratch_bits_.end(), 0);
            for (std::size_t j = 0; j < cols_; ++j)
                if (row[j] & 1u) scratch_bits_[j / 64] |= std::uint64_t(1) << (j % 64);
            return absorb_scratch_bits();
        }
        for (std::size_t j = 0; j < cols_; ++j) scratch_[j] = row[j] % p_;
        return absorb_scratch_dense();
    }

    bool absorb_sparse(std::span<const SparseEntry> row) {
        if (p_ == 2) {
            std::fill(scratch_bits_.begin(), scratch_bits_.end(), 0);
            for (const auto& e : row) {
                if (e.col >= cols_) throw DimensionError("sparse column out of range");
                if (e.value & 1u) scratch_bits_[e.col / 64] ^= std::uint64_t(1) << (e.col % 64);
            }
            return absorb_scratch_bits();
        }
        std::fill(scratch_.begin(), scratch_.end(), 0);
        for (const auto& e : row) {
            if (e.col >= cols_) throw DimensionError("sparse column out of range");
            scratch_[e.col] = modular::add(scratch_[e.col], e.value % p_, p_);
        }
        return absorb_scratch_dense();
    }

    /// Basis row i as a dense residue vector (pivot entry equal to 1).
    Vec basis_row(std::size_t i) const {
        Vec r(cols_);
        if (p_ == 2) {
            for (std::size_t j = 0; j < cols_; ++j) r[j] = Residue((bits_[i * words_ + j / 64] >> (j % 64)) & 1u);
        } else {
            std::copy_n(dense_.begin() + i * cols_, cols_, r.begin());
        }
        return r;
    }

private:
    bool absorb_scratch_bits() {
        // Reduce against pivots.  Only bits present before reduction can sit
        // in pivot columns, since basis rows vanish on other pivot columns.
        for (std::size_t w = 0; w < words_; ++w) {
            std::uint64_t word = scratch_bits_[w];
            while (word) {
                int b = std::countr_zero(word);
                word &= word - 1;
                std::size_t c = w * 64 + b;
                int pr = pivot_of_[c];
                if (pr < 0) continue;
                if (!((scratch_bits_[w] >> b) & 1u)) continue;
                const std::uint64_t* src = &bits_[std::size_t(pr) * words_];
                for (std::size_t k = 0; k < words_; ++k) scratch_bits_[k] ^= src[k];
            }
        }
        std::size_t lead = cols_;
        for (std::size_t w = 0; w < words_; ++w)
            if (scratch_bits_[w]) {
                lead = w * 64 + std::countr_zero(scratch_bits_[w]);
                break;
            }
        if (lead == cols_) return false;

        const std::size_t lw = lead / 64;
        const std::uint64_t lbit = std::uint64_t(1) << (lead % 64);
        for (std::size_t r = 0; r < pivots_.size(); ++r) {
            std::uint64_t* dst = &bits_[r * words_];
            if (dst[lw] & lbit)
                for (std::size_t k = 0; k < words_; ++k) dst[k] ^= scratch_bits_[k];
        }
        pivot_of_[lead] = int(pivots_.size());
        pivots_.push_back(lead);
        bits_.insert(bits_.end(), scratch_bits_.begin(), scratch_bits_.end());
        return true;
    }

    bool absorb_scratch_dense() {
        for (std::size_t c = 0; c < cols_; ++c) {
            Residue v = scratch_[c];
            if (v == 0 || pivot_of_[c] < 0) continue;
            const Residue* src = &dense_[std::size_t(pivot_of_[c]) * cols_];
            for (std::size_t k = 0; k < cols_; ++k)
                if (src[k]) scratch_[k] = modular::sub(scratch_[k], modular::mul(v, src[k], p_), p_);
        }
        std::size_t lead = cols_;
        for (std::size_t c = 0; c < cols_; ++c)
            if (scratch_[c]) {
                lead = c;
                break;
            }
        if (lead == cols_) return false;

        Residue inv = modular::inverse(scratch_[lead], p_);
        for (std::size_t k = 0; k < cols_; ++k) scratch_[k] = modular::mul(scratch_[k], inv, p_);
        for (std::size_t r = 0; r < pivots_.size(); ++r) {
            Residue* dst = &dense_[r * cols_];
            Residue f = dst[lead];
            if (!f) continue;
            for (std::size_t k = 0; k < cols_; ++k)
                if (scratch_[k]) dst[k] = modular::sub(dst[k], modular::mul(f, scratch_[k], p_), p_);
        }
        pivot_of_[lead] = int(pivots_.size());
        pivots_.push_back(lead);
        dense_.insert(dense_.end(), scratch_.begin(), scratch_.end());
        return true;
    }

    Residue p_;
    std::size_t cols_, words_;
    std::vector<int> pivot_of_;
    std::vector<std::size_t> pivots_;
    std::vector<Residue> dense_;
    std::vector<std::uint64_t> bits_;
    Vec scratch_;
    std::vector<std::uint64_t> scratch_bits_;
};

inline EchelonAccumulator absorb_row(EchelonAccumulator acc, std::span<const Residue> row) {
    acc.absorb(row);
    return acc;
}

// ---------------------------------------------------------------------------
// Dense routines

namespace detail {

// Row-reduced echelon form of a dense residue table, in place.  Returns pivot columns.
inline std::vector<std::size_t> rref(std::vector<Vec>& a, std::size_t cols, Residue p) {
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < a.size(); ++c) {
        std::size_t sel = r;
        while (sel < a.size() && a[sel][c] == 0) ++sel;
        if (sel == a.size()) continue;
        std::swap(a[r], a[sel]);
        Residue inv = modular::inverse(a[r][c], p);
        for (auto& x : a[r]) x = modular::mul(x, inv, p);
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (i == r || a[i][c] == 0) continue;
            Residue f = a[i][c];
            for (std::size_t k = 0; k < cols; ++k)
                if (a[r][k]) a[i][k] = modular::sub(a[i][k], modular::mul(f, a[r][k], p), p);
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

inline std::vector<Vec> dense_rows(const FpMatrix& m) {
    std::vector<Vec> a(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) a[i] = m.row(i);
    return a;
}

} // namespace detail

/// Rank by plain Gaussian elimination on unpacked residues (used as the
/// reference path, including for p = 2).
inline std::size_t rank_dense(const FpMatrix& m) {
    auto a = detail::dense_rows(m);
    return detail::rref(a, m.cols(), m.p()).size();
}

/// Rank through the accumulator (bit-packed when p = 2).
inline std::size_t rank(const FpMatrix& m) {
    EchelonAccumulator acc(m.p(), m.cols());
    Vec r;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        r = m.row(i);
        acc.absorb(r);
    }
    return acc.rank();
}

inline std::vector<Vec> kernel_basis(const FpMatrix& m) {
    const Residue p = m.p();
    auto a = detail::dense_rows(m);
    auto pivots = detail::rref(a, m.cols(), p);
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto c : pivots) is_pivot[c] = true;

    std::vector<Vec> basis;
    for (std::size_t free = 0; free < m.cols(); ++free) {
        if (is_pivot[free]) continue;
        Vec v(m.cols(), 0);
        v[free] = 1;
        for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = modular::neg(a[r][free], p);
        basis.push_back(std::move(v));
    }
    return basis;
}

inline std::optional<Vec> solve(const FpMatrix& m, std::span<const Residue> b) {
    if (b.size() != m.rows()) throw DimensionError("right-hand side length must equal row count");
    const Residue p = m.p();
    const std::size_t n = m.cols();
    std::vector<Vec> a(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        a[i] = m.row(i);
        a[i].push_back(b[i] % p);
    }
    auto pivots = detail::rref(a, n + 1, p);
    if (!pivots.empty() && pivots.back() == n) return std::nullopt;
    Vec x(n, 0);
    for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = a[r][n];
    return x;
}

// ---------------------------------------------------------------------------
// Z/p^k

class ZpkMatrix {
public:
    ZpkMatrix() = default;
    ZpkMatrix(Residue p, int k, std::size_t rows, std::size_t cols)
        : p_(p), k_(k), q_(Residue(modular::ipow(p, unsigned(k)))), rows_(rows), cols_(cols), data_(rows * cols, 0) {
        if (!modular::is_prime(p) || k < 1) throw PreconditionError("ZpkMatrix needs a prime p and k >= 1");
    }

    static ZpkMatrix identity(Residue p, int k, std::size_t n) {
        ZpkMatrix m(p, k, n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    Residue p() const { return p_; }
    int k() const { return k_; }
    Residue modulus() const { return q_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Residue& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    Residue operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    void set(std::size_t i, std::size_t j, long long v) { data_[i * cols_ + j] = modular::reduce(v, q_); }

    friend ZpkMatrix operator*(const ZpkMatrix& a, const ZpkMatrix& b) {
        if (a.q_ != b.q_ || a.cols_ != b.rows_) throw DimensionError("matrix product shape mismatch");
        ZpkMatrix c(a.p_, a.k_, a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                Residue x = a(i, k);
                if (!x) continue;
                for (std::size_t j = 0; j < b.cols_; ++j)
                    c(i, j) = Residue((c(i, j) + std::uint64_t(x) * b(k, j)) % a.q_);
            }
        return c;
    }

    friend bool operator==(const ZpkMatrix&, const ZpkMatrix&) = default;

private:
    Residue p_ = 2;
    int k_ = 1;
    Residue q_ = 2;
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Residue> data_;
};

struct SmithResult {
    /// Diagonal exponents e_i (pivot p^{e_i}), ascending, one per min(rows, cols) slot; e = k means a zero slot.
    std::vector<int> exponents;
    /// V^{-1} where U·A·V = D; only filled when requested.
    std::optional<ZpkMatrix> col_inverse;
};

/// Smith form over the local ring Z/p^k.  Pivots are chosen by minimal
/// valuation so every elimination step divides exactly.
inline SmithResult smith(ZpkMatrix a, bool want_col_inverse = false) {
    const Residue p = a.p(), q = a.modulus();
    const int k = a.k();
    const std::size_t rows = a.rows(), cols = a.cols(), n = std::min(rows, cols);
    SmithResult out;
    std::optional<ZpkMatrix> w;
    if (want_col_inverse) w = ZpkMatrix::identity(p, k, cols);

    auto val = [&](Residue x) { return modular::valuation(x, p, k); };
    auto unit_part = [&](Residue x, int v) { return Residue(x / Residue(modular::ipow(p, unsigned(v)))); };

    for (std::size_t t = 0; t < n; ++t) {
        int best = k;
        std::size_t bi = t, bj = t;
        for (std::size_t i = t; i < rows && best > 0; ++i)
            for (std::size_t j = t; j < cols; ++j) {
                int v = val(a(i, j));
                if (v < best) {
                    best = v, bi = i, bj = j;
                    if (v == 0) break;
                }
            }
        if (best == k) {
            for (std::size_t r = t; r < n; ++r) out.exponents.push_back(k);
            break;
        }
        if (bi != t)
            for (std::size_t j = 0; j < cols; ++j) std::swap(a(t, j), a(bi, j));
        if (bj != t) {
            for (std::size_t i = 0; i < rows; ++i) std::swap(a(i, t), a(i, bj));
            if (w)
                for (std::size_t j = 0; j < cols; ++j) std::swap((*w)(t, j), (*w)(bj, j));
        }
        const Residue pivot = a(t, t);
        const Residue unit = unit_part(pivot, best);
        const Residue unit_inv = modular::inverse(unit, q);
        const Residue pk_best = Residue(modular::ipow(p, unsigned(best)));

        for (std::size_t i = t + 1; i < rows; ++i) {
            Residue x = a(i, t);
            if (!x) continue;
            Residue f = modular::mul(Residue(x / pk_best), unit_inv, q);
            for (std::size_t j = t; j < cols; ++j)
                if (a(t, j)) a(i, j) = modular::sub(a(i, j), modular::mul(f, a(t, j), q), q);
        }
        for (std::size_t j = t + 1; j < cols; ++j) {
            Residue x = a(t, j);
            if (!x) continue;
            Residue f = modular::mul(Residue(x / pk_best), unit_inv, q);
            for (std::size_t i = t; i < rows; ++i)
                if (a(i, t)) a(i, j) = modular::sub(a(i, j), modular::mul(f, a(i, t), q), q);
            if (w)
                for (std::size_t c = 0; c < cols; ++c)
                    (*w)(t, c) = modular::add((*w)(t, c), modular::mul(f, (*w)(j, c), q), q);
        }
        // Normalize the pivot to p^best by scaling column t with unit^{-1}.
        if (w)
            for (std::size_t c = 0; c < cols; ++c) (*w)(t, c) = modular::mul((*w)(t, c), unit, q);
        a(t, t) = pk_best;
        out.exponents.push_back(best);
    }
    // Exponents come out nondecreasing already because each pivot has
    // minimal valuation among the remaining block.
    out.col_inverse = std::move(w);
    return out;
}

/// Multiset of elementary-divisor exponents of m.
inline std::vector<int> smith_rank_profile(const ZpkMatrix& m) { return smith(m).exponents; }

} // namespace hsprop
