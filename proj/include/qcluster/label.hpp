#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "qcluster/errors.hpp"

namespace qcluster {

/// Index of a cluster variable: a short tuple of integers.
///
/// Plain seeds use one-part labels (1, 2, 3), Grassmannian seeds use grid
/// pairs (i,j), and coproducts prepend a block tag.  Labels carry a fixed
/// total order (lexicographic on parts, then length) that every seed shares,
/// so normalization scalars agree between a seed and its full subseeds.
class Label {
public:
    static constexpr std::size_t kMaxParts = 4;

    Label() = default;

    Label(std::initializer_list<int> parts) : Label(std::span<const int>(parts.begin(), parts.size())) {}

    explicit Label(std::span<const int> parts) {
        if (parts.size() == 0 || parts.size() > kMaxParts) {
            throw IndexError("label must have between 1 and " + std::to_string(kMaxParts) + " parts");
        }
        for (std::size_t i = 0; i < parts.size(); ++i) {
            parts_[i] = parts[i];
        }
        size_ = static_cast<std::uint8_t>(parts.size());
    }

    std::size_t size() const noexcept { return size_; }
    int operator[](std::size_t i) const noexcept { return parts_[i]; }

    std::vector<int> parts() const { return {parts_.begin(), parts_.begin() + size_}; }

    /// The label with `tag` prepended (used to make coproduct blocks disjoint).
    Label tagged(int tag) const {
        if (size_ + 1u > kMaxParts) {
            throw IndexError("label " + str() + " is too deep to tag");
        }
        std::vector<int> p{tag};
        for (std::size_t i = 0; i < size_; ++i) {
            p.push_back(parts_[i]);
        }
        return Label(std::span<const int>(p));
    }

    /// "3" for one-part labels, "(1,2)" otherwise.
    std::string str() const {
        if (size_ == 1) {
            return std::to_string(parts_[0]);
        }
        std::string s = "(";
        for (std::size_t i = 0; i < size_; ++i) {
            if (i) s += ',';
            s += std::to_string(parts_[i]);
        }
        return s + ")";
    }

    /// Variable token used in printed Laurent expressions: x3, x(1,2), x(-1).
    std::string var_name() const {
        if (size_ == 1 && parts_[0] >= 0) {
            return "x" + std::to_string(parts_[0]);
        }
        if (size_ == 1) {
            return "x(" + std::to_string(parts_[0]) + ")";
        }
        return "x" + str();
    }

    friend auto operator<=>(const Label&, const Label&) = default;
    friend bool operator==(const Label&, const Label&) = default;

    friend std::ostream& operator<<(std::ostream& os, const Label& l) { return os << l.str(); }

private:
    std::array<int, kMaxParts> parts_{};
    std::uint8_t size_ = 0;
};

/// Parses "3", "-1", "(1,2)" or "[1,2]".
inline Label parse_label(const std::string& text) {
    std::vector<int> parts;
    std::string cur;
    bool any = false;
    for (char c : text) {
        if (c == '(' || c == ')' || c == '[' || c == ']' || c == ' ') {
            continue;
        }
        if (c == ',') {
            if (cur.empty()) throw ParseError("bad label '" + text + "'");
            parts.push_back(std::stoi(cur));
            cur.clear();
            continue;
        }
        if (c != '-' && (c < '0' || c > '9')) {
            throw ParseError("bad label '" + text + "'");
        }
        cur += c;
        any = true;
    }
    if (!any || cur.empty() || cur == "-") {
        throw ParseError("bad label '" + text + "'");
    }
    parts.push_back(std::stoi(cur));
    return Label(std::span<const int>(parts));
}

} // namespace qcluster
