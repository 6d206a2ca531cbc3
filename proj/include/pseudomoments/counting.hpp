#pragma once

// Exact enumeration of nonnegative integer matrices with constrained row and
// column sums: contingency tables N_{mu nu}, magic squares H_k(j),
// pseudomagic squares G_k(l), and symmetric even-diagonal variants.

#include "core.hpp"
#include "partition.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace pseudomoments::counting {

/// Constraint on the sum of one row or column.
struct LineConstraint {
    enum class Kind { exact, at_most };

    Kind kind = Kind::exact;
    int value = 0;

    static constexpr LineConstraint exact(int v) { return {Kind::exact, v}; }
    static constexpr LineConstraint at_most(int v) { return {Kind::at_most, v}; }

    bool is_exact() const noexcept { return kind == Kind::exact; }
    friend bool operator==(const LineConstraint&, const LineConstraint&) = default;
};

struct MatrixCountSpec {
    int rows = 0;
    int cols = 0;
    std::vector<LineConstraint> row_constraints;
    std::vector<LineConstraint> col_constraints;
    bool symmetric = false;
    bool even_diagonal = false;

    void validate() const
    {
        if (rows < 1 || cols < 1) {
            throw std::invalid_argument("matrix dimensions must be positive");
        }
        if (row_constraints.size() != static_cast<std::size_t>(rows) ||
            col_constraints.size() != static_cast<std::size_t>(cols)) {
            throw std::invalid_argument("one constraint per row and per column is required");
        }
        for (const auto* side : {&row_constraints, &col_constraints}) {
            for (const auto& c : *side) {
                if (c.value < 0) {
                    throw std::invalid_argument("line sums must be nonnegative");
                }
            }
        }
        if (symmetric && (rows != cols || row_constraints != col_constraints)) {
            throw std::invalid_argument("symmetric counting needs a square matrix with matching row/column constraints");
        }
        if (even_diagonal && !symmetric) {
            throw std::invalid_argument("even_diagonal is only supported together with symmetric");
        }
    }
};

inline MatrixCountSpec contingency_spec(const Partition& row_sums, const Partition& col_sums)
{
    MatrixCountSpec spec;
    spec.rows = static_cast<int>(row_sums.length());
    spec.cols = static_cast<int>(col_sums.length());
    for (int p : row_sums.parts()) spec.row_constraints.push_back(LineConstraint::exact(p));
    for (int p : col_sums.parts()) spec.col_constraints.push_back(LineConstraint::exact(p));
    return spec;
}

inline MatrixCountSpec square_spec(int k, LineConstraint c, bool symmetric = false, bool even_diagonal = false)
{
    MatrixCountSpec spec;
    spec.rows = spec.cols = k;
    spec.row_constraints.assign(static_cast<std::size_t>(std::max(k, 0)), c);
    spec.col_constraints = spec.row_constraints;
    spec.symmetric = symmetric;
    spec.even_diagonal = even_diagonal;
    return spec;
}

inline MatrixCountSpec magic_spec(int k, int j) { return square_spec(k, LineConstraint::exact(j)); }
inline MatrixCountSpec pseudomagic_spec(int k, int l) { return square_spec(k, LineConstraint::at_most(l)); }
inline MatrixCountSpec symmetric_even_spec(int k, int j) { return square_spec(k, LineConstraint::exact(j), true, true); }
inline MatrixCountSpec symmetric_even_bounded_spec(int k, int l)
{
    return square_spec(k, LineConstraint::at_most(l), true, true);
}

/// Row i and column i are both bounded by bounds[i].
inline MatrixCountSpec pseudomagic_multi_spec(const std::vector<int>& bounds)
{
    MatrixCountSpec spec;
    spec.rows = spec.cols = static_cast<int>(bounds.size());
    for (int b : bounds) spec.row_constraints.push_back(LineConstraint::at_most(b));
    spec.col_constraints = spec.row_constraints;
    return spec;
}

namespace detail {

// Column-by-column dynamic program. A state is the sorted multiset of
// (remaining row capacity, row kind); rows with equal entries are
// exchangeable, so sorting is a sound canonical form.
class ColumnCounter {
public:
    explicit ColumnCounter(const MatrixCountSpec& spec)
        : cols_(spec.col_constraints), memo_(spec.col_constraints.size())
    {
        suffix_max_.assign(cols_.size() + 1, 0);
        suffix_exact_.assign(cols_.size() + 1, 0);
        for (std::size_t c = cols_.size(); c-- > 0;) {
            suffix_max_[c] = suffix_max_[c + 1] + cols_[c].value;
            suffix_exact_[c] = suffix_exact_[c + 1] + (cols_[c].is_exact() ? cols_[c].value : 0);
        }
        for (const auto& r : spec.row_constraints) {
            initial_.push_back(encode(r.value, r.is_exact()));
        }
        std::sort(initial_.begin(), initial_.end());
    }

    BigInt run() { return count(0, initial_); }

private:
    static int encode(int cap, bool exact) { return 2 * cap + (exact ? 1 : 0); }
    static int cap_of(int code) { return code >> 1; }
    static bool exact_of(int code) { return (code & 1) != 0; }

    BigInt count(std::size_t col, const std::vector<int>& state)
    {
        long long exact_need = 0;
        long long total_cap = 0;
        bool all_exact = true;
        for (int code : state) {
            total_cap += cap_of(code);
            if (exact_of(code)) {
                exact_need += cap_of(code);
            } else {
                all_exact = false;
            }
        }
        if (col == cols_.size()) {
            return exact_need == 0 ? 1 : 0;
        }
        if (exact_need > suffix_max_[col] || total_cap < suffix_exact_[col]) {
            return 0;
        }
        const LineConstraint& column = cols_[col];
        if (col + 1 == cols_.size() && all_exact) {
            // The last column is forced to absorb every remaining capacity.
            const bool ok = column.is_exact() ? total_cap == column.value : total_cap <= column.value;
            return ok ? 1 : 0;
        }

        auto& table = memo_[col];
        if (auto it = table.find(state); it != table.end()) {
            return it->second;
        }
        BigInt acc = 0;
        std::vector<int> next(state.size());
        distribute(col, state, 0, column.value, column.is_exact(), next, acc);
        table.emplace(state, acc);
        return acc;
    }

    void distribute(std::size_t col, const std::vector<int>& state, std::size_t row, int budget, bool exact_column,
                    std::vector<int>& next, BigInt& acc)
    {
        if (row == state.size()) {
            if (exact_column && budget != 0) {
                return;
            }
            std::vector<int> sorted = next;
            std::sort(sorted.begin(), sorted.end());
            acc += count(col + 1, sorted);
            return;
        }
        const int cap = cap_of(state[row]);
        const bool exact = exact_of(state[row]);
        int lo = 0;
        if (exact_column && row + 1 == state.size()) {
            if (budget > cap) return;
            lo = budget;
        }
        const int hi = std::min(cap, budget);
        for (int x = lo; x <= hi; ++x) {
            next[row] = encode(cap - x, exact);
            distribute(col, state, row + 1, budget - x, exact_column, next, acc);
        }
    }

    std::vector<LineConstraint> cols_;
    std::vector<std::map<std::vector<int>, BigInt>> memo_;
    std::vector<long long> suffix_max_;
    std::vector<long long> suffix_exact_;
    std::vector<int> initial_;
};

// Upper-triangle enumeration for symmetric matrices, with residual pruning.
class SymmetricCounter {
public:
    explicit SymmetricCounter(const MatrixCountSpec& spec)
        : k_(spec.rows), even_diagonal_(spec.even_diagonal)
    {
        for (const auto& c : spec.row_constraints) {
            residual_.push_back(c.value);
            exact_.push_back(c.is_exact());
        }
    }

    BigInt run()
    {
        leaves_ = 0;
        visit(0, 0);
        return BigInt(leaves_);
    }

private:
    void visit(int i, int j)
    {
        if (i == k_) {
            ++leaves_;
            return;
        }
        auto& ri = residual_[static_cast<std::size_t>(i)];
        if (j == k_) {
            if (exact_[static_cast<std::size_t>(i)] && ri != 0) return;
            visit(i + 1, i + 1);
            return;
        }
        if (j == i) {
            const int step = even_diagonal_ ? 2 : 1;
            for (int a = 0; a <= ri; a += step) {
                ri -= a;
                visit(i, j + 1);
                ri += a;
            }
            return;
        }
        auto& rj = residual_[static_cast<std::size_t>(j)];
        if (exact_[static_cast<std::size_t>(i)]) {
            // Remaining off-diagonal cells of row i must absorb ri.
            long long room = 0;
            for (int t = j; t < k_; ++t) room += residual_[static_cast<std::size_t>(t)];
            if (room < ri) return;
            if (j + 1 == k_) {
                if (ri > rj) return;
                const int a = ri;
                ri -= a;
                rj -= a;
                visit(i, j + 1);
                ri += a;
                rj += a;
                return;
            }
        }
        const int hi = std::min(ri, rj);
        for (int a = 0; a <= hi; ++a) {
            ri -= a;
            rj -= a;
            visit(i, j + 1);
            ri += a;
            rj += a;
        }
    }

    int k_;
    bool even_diagonal_;
    std::vector<int> residual_;
    std::vector<bool> exact_;
    std::uint64_t leaves_ = 0;
};

} // namespace detail

/// Counts matrices satisfying spec using the dynamic program (or the
/// triangle enumerator for symmetric specs).
inline BigInt count_matrices(const MatrixCountSpec& spec)
{
    spec.validate();
    if (spec.symmetric) {
        return detail::SymmetricCounter(spec).run();
    }
    return detail::ColumnCounter(spec).run();
}

inline BigInt count_contingency(const Partition& row_sums, const Partition& col_sums)
{
    if (row_sums.weight() != col_sums.weight()) {
        return 0;
    }
    if (row_sums.empty()) {
        return 1;  // both weights zero: only the zero matrix
    }
    return count_matrices(contingency_spec(row_sums, col_sums));
}

inline void require_positive_k(int k)
{
    if (k < 1) throw std::invalid_argument("k must be at least 1");
}

inline void require_nonnegative(int v, const char* name)
{
    if (v < 0) throw std::invalid_argument(std::string(name) + " must be nonnegative");
}

/// H_k(j): k x k matrices with every row and column summing to j.
inline BigInt count_magic(int k, int j)
{
    require_positive_k(k);
    require_nonnegative(j, "j");
    return count_matrices(magic_spec(k, j));
}

/// G_k(l): k x k matrices with every row and column sum at most l.
inline BigInt count_pseudomagic(int k, int l)
{
    require_positive_k(k);
    require_nonnegative(l, "l");
    return count_matrices(pseudomagic_spec(k, l));
}

/// G_k(l_1, ..., l_k).
inline BigInt count_pseudomagic_multi(const std::vector<int>& bounds)
{
    if (bounds.empty()) throw std::invalid_argument("at least one bound is required");
    for (int b : bounds) require_nonnegative(b, "bound");
    return count_matrices(pseudomagic_multi_spec(bounds));
}

/// S^sp_k(j): symmetric, even diagonal, every row summing to j.
inline BigInt count_symmetric_even(int k, int j)
{
    require_positive_k(k);
    require_nonnegative(j, "j");
    if ((static_cast<long long>(k) * j) % 2 != 0) {
        return 0;
    }
    return count_matrices(symmetric_even_spec(k, j));
}

/// F_k(l): symmetric, even diagonal, every row sum at most l.
inline BigInt count_symmetric_even_bounded(int k, int l)
{
    require_positive_k(k);
    require_nonnegative(l, "l");
    return count_matrices(symmetric_even_bounded_spec(k, l));
}

inline constexpr double default_brute_force_cap = 1e7;

/// Entry-by-entry enumeration; the independent oracle for count_matrices.
/// Refuses when the product of per-entry ranges exceeds explosion_cap.
inline BigInt brute_force_count(const MatrixCountSpec& spec, double explosion_cap = default_brute_force_cap)
{
    spec.validate();
    struct Cell {
        int row;
        int col;
        int bound;
        int step;
    };
    std::vector<Cell> cells;
    double grid = 1.0;
    for (int i = 0; i < spec.rows; ++i) {
        for (int j = spec.symmetric ? i : 0; j < spec.cols; ++j) {
            const int bound = std::min(spec.row_constraints[static_cast<std::size_t>(i)].value,
                                       spec.col_constraints[static_cast<std::size_t>(j)].value);
            const int step = (spec.even_diagonal && i == j) ? 2 : 1;
            cells.push_back({i, j, bound, step});
            grid *= bound / step + 1;
        }
    }
    if (grid > explosion_cap) {
        throw SizeLimitError("brute-force grid of " + std::to_string(grid) + " matrices exceeds the cap of " +
                             std::to_string(explosion_cap));
    }

    const auto satisfied = [](const LineConstraint& c, long long sum) {
        return c.is_exact() ? sum == c.value : sum <= c.value;
    };
    std::vector<int> values(cells.size(), 0);
    std::vector<long long> row_sum(static_cast<std::size_t>(spec.rows));
    std::vector<long long> col_sum(static_cast<std::size_t>(spec.cols));
    std::uint64_t hits = 0;
    while (true) {
        std::fill(row_sum.begin(), row_sum.end(), 0);
        std::fill(col_sum.begin(), col_sum.end(), 0);
        for (std::size_t c = 0; c < cells.size(); ++c) {
            const auto r = static_cast<std::size_t>(cells[c].row);
            const auto s = static_cast<std::size_t>(cells[c].col);
            row_sum[r] += values[c];
            if (spec.symmetric && r != s) {
                row_sum[s] += values[c];
            } else if (!spec.symmetric) {
                col_sum[s] += values[c];
            }
        }
        if (spec.symmetric) col_sum = row_sum;
        bool ok = true;
        for (std::size_t r = 0; ok && r < row_sum.size(); ++r) ok = satisfied(spec.row_constraints[r], row_sum[r]);
        for (std::size_t s = 0; ok && s < col_sum.size(); ++s) ok = satisfied(spec.col_constraints[s], col_sum[s]);
        if (ok) ++hits;

        std::size_t pos = 0;
        while (pos < cells.size()) {
            values[pos] += cells[pos].step;
            if (values[pos] <= cells[pos].bound) break;
            values[pos] = 0;
            ++pos;
        }
        if (pos == cells.size()) break;
    }
    return BigInt(hits);
}

} // namespace pseudomoments::counting
