// Copyright 2026 The qwave Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "qwave/error.hpp"
#include "qwave/format.hpp"

namespace qwave {

using RealSparse = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Real sparse matrix kept as a canonically ordered triplet list (row-major,
/// column ascending, no duplicates, no explicit zeros).
class SparseOperator {
   public:
    struct Entry {
        std::size_t row;
        std::size_t col;
        double value;
        friend bool operator==(const Entry &, const Entry &) = default;
    };

    SparseOperator() = default;

    SparseOperator(std::size_t rows, std::size_t cols, std::vector<Entry> entries)
        : rows_(rows), cols_(cols), entries_(std::move(entries)) {
        canonicalize();
    }

    static SparseOperator diagonal(const Eigen::VectorXd &values) {
        std::vector<Entry> entries;
        entries.reserve(static_cast<std::size_t>(values.size()));
        for (Eigen::Index i = 0; i < values.size(); ++i) {
            entries.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(i), values[i]});
        }
        auto n = static_cast<std::size_t>(values.size());
        return SparseOperator(n, n, std::move(entries));
    }

    static SparseOperator identity(std::size_t n) {
        return diagonal(Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n)));
    }

    static SparseOperator from_eigen(const RealSparse &m) {
        std::vector<Entry> entries;
        for (int k = 0; k < m.outerSize(); ++k) {
            for (RealSparse::InnerIterator it(m, k); it; ++it) {
                entries.push_back({static_cast<std::size_t>(it.row()), static_cast<std::size_t>(it.col()),
                                   it.value()});
            }
        }
        return SparseOperator(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()),
                              std::move(entries));
    }

    static SparseOperator from_dense(const Eigen::MatrixXd &m) {
        std::vector<Entry> entries;
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            for (Eigen::Index c = 0; c < m.cols(); ++c) {
                if (m(r, c) != 0.0) {
                    entries.push_back({static_cast<std::size_t>(r), static_cast<std::size_t>(c), m(r, c)});
                }
            }
        }
        return SparseOperator(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()),
                              std::move(entries));
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t nonzeros() const { return entries_.size(); }
    const std::vector<Entry> &entries() const { return entries_; }

    RealSparse to_eigen() const {
        std::vector<Eigen::Triplet<double>> trips;
        trips.reserve(entries_.size());
        for (const auto &e : entries_) {
            trips.emplace_back(static_cast<int>(e.row), static_cast<int>(e.col), e.value);
        }
        RealSparse m(static_cast<Eigen::Index>(rows_), static_cast<Eigen::Index>(cols_));
        m.setFromTriplets(trips.begin(), trips.end());
        return m;
    }

    Eigen::MatrixXd to_dense() const {
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows_), static_cast<Eigen::Index>(cols_));
        for (const auto &e : entries_) {
            m(static_cast<Eigen::Index>(e.row), static_cast<Eigen::Index>(e.col)) = e.value;
        }
        return m;
    }

    SparseOperator transpose() const {
        std::vector<Entry> t;
        t.reserve(entries_.size());
        for (const auto &e : entries_) {
            t.push_back({e.col, e.row, e.value});
        }
        return SparseOperator(cols_, rows_, std::move(t));
    }

    SparseOperator scaled(double factor) const {
        std::vector<Entry> s = entries_;
        for (auto &e : s) {
            e.value *= factor;
        }
        return SparseOperator(rows_, cols_, std::move(s));
    }

    Eigen::VectorXd apply(const Eigen::VectorXd &x) const {
        require(static_cast<std::size_t>(x.size()) == cols_, ErrorKind::dimension,
                "operator has " + std::to_string(cols_) + " columns, vector has " + std::to_string(x.size()));
        Eigen::VectorXd y = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(rows_));
        for (const auto &e : entries_) {
            y[static_cast<Eigen::Index>(e.row)] += e.value * x[static_cast<Eigen::Index>(e.col)];
        }
        return y;
    }

    double value_at(std::size_t row, std::size_t col) const {
        auto it = std::lower_bound(entries_.begin(), entries_.end(), Entry{row, col, 0.0}, ordering);
        if (it != entries_.end() && it->row == row && it->col == col) {
            return it->value;
        }
        return 0.0;
    }

    bool is_diagonal() const {
        return std::all_of(entries_.begin(), entries_.end(), [](const Entry &e) { return e.row == e.col; });
    }

    Eigen::VectorXd diagonal_values() const {
        Eigen::VectorXd d = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(std::min(rows_, cols_)));
        for (const auto &e : entries_) {
            if (e.row == e.col) {
                d[static_cast<Eigen::Index>(e.row)] = e.value;
            }
        }
        return d;
    }

    /// Largest number of stored entries in any row.
    std::size_t max_row_nonzeros() const {
        std::size_t best = 0;
        std::size_t i = 0;
        while (i < entries_.size()) {
            std::size_t j = i;
            while (j < entries_.size() && entries_[j].row == entries_[i].row) {
                ++j;
            }
            best = std::max(best, j - i);
            i = j;
        }
        return best;
    }

    double max_abs() const {
        double m = 0.0;
        for (const auto &e : entries_) {
            m = std::max(m, std::abs(e.value));
        }
        return m;
    }

    /// Triplet text: a header line `rows cols nnz`, then `row col value` per entry.
    void write_triplets(std::ostream &out) const {
        out << rows_ << ' ' << cols_ << ' ' << entries_.size() << '\n';
        for (const auto &e : entries_) {
            out << e.row << ' ' << e.col << ' ' << format_double(e.value) << '\n';
        }
    }

    friend bool operator==(const SparseOperator &, const SparseOperator &) = default;

   private:
    static bool ordering(const Entry &a, const Entry &b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    }

    void canonicalize() {
        for (const auto &e : entries_) {
            require(e.row < rows_ && e.col < cols_, ErrorKind::dimension,
                    "triplet (" + std::to_string(e.row) + ", " + std::to_string(e.col) + ") outside " +
                        std::to_string(rows_) + "x" + std::to_string(cols_));
            require(std::isfinite(e.value), ErrorKind::validation, "non-finite operator entry");
        }
        std::sort(entries_.begin(), entries_.end(), ordering);
        for (std::size_t i = 1; i < entries_.size(); ++i) {
            require(!(entries_[i].row == entries_[i - 1].row && entries_[i].col == entries_[i - 1].col),
                    ErrorKind::validation,
                    "duplicate triplet (" + std::to_string(entries_[i].row) + ", " +
                        std::to_string(entries_[i].col) + ")");
        }
        std::erase_if(entries_, [](const Entry &e) { return e.value == 0.0; });
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Entry> entries_;
};

/// max |a_ij + sign * b_ji|; with sign = +1 this is the anti-symmetry defect of a
/// against its own transpose when b == a.
inline double max_transpose_defect(const SparseOperator &a, const SparseOperator &b, double sign) {
    require(a.rows() == b.cols() && a.cols() == b.rows(), ErrorKind::dimension, "transpose shape mismatch");
    double worst = 0.0;
    auto bt = b.transpose();
    const auto &x = a.entries();
    const auto &y = bt.entries();
    std::size_t i = 0, j = 0;
    while (i < x.size() || j < y.size()) {
        bool take_x = j == y.size() ||
                      (i < x.size() && (x[i].row < y[j].row || (x[i].row == y[j].row && x[i].col <= y[j].col)));
        bool take_y = i == x.size() ||
                      (j < y.size() && (y[j].row < x[i].row || (y[j].row == x[i].row && y[j].col <= x[i].col)));
        double v = 0.0;
        if (take_x) v += x[i].value;
        if (take_y) v += sign * y[j].value;
        worst = std::max(worst, std::abs(v));
        if (take_x) ++i;
        if (take_y) ++j;
    }
    return worst;
}

/// ‖A + Aᵀ‖_max, entry-exact.
inline double antisymmetry_defect(const SparseOperator &a) { return max_transpose_defect(a, a, 1.0); }

/// ‖A − Aᵀ‖_max, entry-exact.
inline double symmetry_defect(const SparseOperator &a) { return max_transpose_defect(a, a, -1.0); }

}  // namespace qwave
