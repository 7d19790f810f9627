#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "mrf/errors.hpp"

namespace mrf {

// Complete discrete sample: n_rows rows over n_vars variables, cell values
// are state indices in [0, cardinality). No missing values.
class Dataset {
public:
    Dataset(int n_vars, std::vector<int> cardinalities, std::vector<int> values)
        : n_vars_(n_vars), cards_(std::move(cardinalities)), values_(std::move(values)) {
        if (n_vars_ <= 0) throw DataError("dataset: need at least one variable");
        if (static_cast<int>(cards_.size()) != n_vars_)
            throw DataError("dataset: cardinality count does not match variable count");
        if (values_.empty() || values_.size() % static_cast<size_t>(n_vars_) != 0)
            throw DataError("dataset: cell count is not a positive multiple of the variable count");
        n_rows_ = static_cast<int>(values_.size() / static_cast<size_t>(n_vars_));
        for (int v = 0; v < n_vars_; ++v)
            if (cards_[v] < 2) throw DataError("dataset: cardinality must be at least 2");
        for (size_t c = 0; c < values_.size(); ++c) {
            const int v = static_cast<int>(c % static_cast<size_t>(n_vars_));
            if (values_[c] < 0 || values_[c] >= cards_[v])
                throw DataError("dataset: cell value out of range for variable " + std::to_string(v));
        }
    }

    int n_vars() const { return n_vars_; }
    int n_rows() const { return n_rows_; }
    int cardinality(int v) const { return cards_.at(v); }
    const std::vector<int>& cardinalities() const { return cards_; }

    int value(int row, int v) const { return values_[static_cast<size_t>(row) * n_vars_ + v]; }

    const int* row(int r) const { return values_.data() + static_cast<size_t>(r) * n_vars_; }

    // Copy with columns permuted: column v of the result is column perm[v]
    // of the source.
    Dataset with_columns(const std::vector<int>& perm) const {
        std::vector<int> cards(perm.size());
        std::vector<int> vals(static_cast<size_t>(n_rows_) * perm.size());
        for (size_t v = 0; v < perm.size(); ++v) cards[v] = cards_.at(perm[v]);
        for (int r = 0; r < n_rows_; ++r)
            for (size_t v = 0; v < perm.size(); ++v)
                vals[static_cast<size_t>(r) * perm.size() + v] = value(r, perm[v]);
        return Dataset(static_cast<int>(perm.size()), std::move(cards), std::move(vals));
    }

private:
    int n_vars_ = 0;
    int n_rows_ = 0;
    std::vector<int> cards_;
    std::vector<int> values_;
};

// Counts for a target pair (i, k) under a conditioning set Z: for each
// observed configuration of Z, an r_i x r_k matrix of joint counts. Only
// observed configurations are stored, so the size is bounded by n_rows.
struct ContingencyTable {
    int i = 0;
    int k = 0;
    std::vector<int> z;  // ascending
    int ri = 0;
    int rk = 0;
    // Z-configuration (values aligned with z) -> row-major r_i x r_k counts.
    std::map<std::vector<int>, std::vector<std::int64_t>> configs;

    std::int64_t total() const {
        std::int64_t t = 0;
        for (const auto& [cfg, m] : configs)
            for (std::int64_t c : m) t += c;
        return t;
    }
};

inline ContingencyTable count_table(const Dataset& d, int i, int k, std::vector<int> z) {
    std::sort(z.begin(), z.end());
    z.erase(std::unique(z.begin(), z.end()), z.end());
    auto check = [&](int v) {
        if (v < 0 || v >= d.n_vars()) throw std::out_of_range("count_table: variable index out of range");
    };
    check(i);
    check(k);
    for (int v : z) check(v);
    if (i == k) throw std::invalid_argument("count_table: target variables must differ");
    if (std::binary_search(z.begin(), z.end(), i) || std::binary_search(z.begin(), z.end(), k))
        throw std::invalid_argument("count_table: conditioning set overlaps the target pair");

    ContingencyTable t;
    t.i = i;
    t.k = k;
    t.z = std::move(z);
    t.ri = d.cardinality(i);
    t.rk = d.cardinality(k);
    std::vector<int> cfg(t.z.size());
    for (int r = 0; r < d.n_rows(); ++r) {
        const int* row = d.row(r);
        for (size_t p = 0; p < t.z.size(); ++p) cfg[p] = row[t.z[p]];
        auto [it, inserted] = t.configs.try_emplace(cfg);
        if (inserted) it->second.assign(static_cast<size_t>(t.ri) * t.rk, 0);
        ++it->second[static_cast<size_t>(row[i]) * t.rk + row[k]];
    }
    return t;
}

// --- CSV ingestion ---
// Comma-separated, required header row of variable names, body rows of
// non-negative integer state indices. Cardinalities are inferred as
// max(observed)+1 per column, floored at 2, unless overridden.

inline Dataset read_csv(const std::string& text, const std::vector<int>& cardinality_override = {}) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    int n_vars = -1;
    std::vector<int> values;
    auto split_count = [](const std::string& s) {
        return static_cast<int>(std::count(s.begin(), s.end(), ',')) + 1;
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (n_vars < 0) {  // header
            n_vars = split_count(line);
            continue;
        }
        if (split_count(line) != n_vars)
            throw DataError("csv line " + std::to_string(lineno) + ": expected " + std::to_string(n_vars) +
                            " fields, got " + std::to_string(split_count(line)));
        std::istringstream fields(line);
        std::string cell;
        while (std::getline(fields, cell, ',')) {
            size_t pos = 0;
            int v;
            try {
                v = std::stoi(cell, &pos);
            } catch (const std::exception&) {
                throw DataError("csv line " + std::to_string(lineno) + ": non-integer cell \"" + cell + "\"");
            }
            if (pos != cell.size() || v < 0)
                throw DataError("csv line " + std::to_string(lineno) + ": non-integer cell \"" + cell + "\"");
            values.push_back(v);
        }
        // std::getline drops a trailing empty field; the count check above
        // already rejected rows with the wrong arity, except "v," at the end
        if (values.size() % static_cast<size_t>(n_vars) != 0)
            throw DataError("csv line " + std::to_string(lineno) + ": empty trailing cell");
    }
    if (n_vars < 0) throw DataError("csv: missing header row");
    if (values.empty()) throw DataError("csv: empty body");

    std::vector<int> cards(n_vars, 2);
    const int n_rows = static_cast<int>(values.size()) / n_vars;
    for (int r = 0; r < n_rows; ++r)
        for (int v = 0; v < n_vars; ++v)
            cards[v] = std::max(cards[v], values[static_cast<size_t>(r) * n_vars + v] + 1);
    if (!cardinality_override.empty()) {
        if (static_cast<int>(cardinality_override.size()) != n_vars)
            throw DataError("csv: cardinality override has wrong length");
        for (int v = 0; v < n_vars; ++v) {
            if (cardinality_override[v] < cards[v] && cardinality_override[v] < 2)
                throw DataError("csv: cardinality override below 2");
            if (cardinality_override[v] < cards[v])
                throw DataError("csv: observed value exceeds cardinality override for column " +
                                std::to_string(v));
        }
        cards = cardinality_override;
    }
    return Dataset(n_vars, std::move(cards), std::move(values));
}

inline std::string write_csv(const Dataset& d) {
    std::ostringstream out;
    for (int v = 0; v < d.n_vars(); ++v) out << (v ? "," : "") << 'x' << v;
    out << '\n';
    for (int r = 0; r < d.n_rows(); ++r) {
        for (int v = 0; v < d.n_vars(); ++v) out << (v ? "," : "") << d.value(r, v);
        out << '\n';
    }
    return out.str();
}

} // namespace mrf
