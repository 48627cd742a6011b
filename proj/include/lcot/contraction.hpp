#pragma once

#include <stdexcept>
#include <string>

namespace lcot {

enum class SpecErrorKind {
    Syntax,
    RepeatedLabel, ///< label repeated inside one operand (diagonal)
    Entrywise,     ///< label shared by both operands and kept in the output
    UnknownOutput, ///< output label absent from both operands
    MissingOutput, ///< free label dropped from the output clause
    Mismatch,      ///< labels do not match the operand tensors
};

class spec_error : public std::invalid_argument {
  public:
    spec_error(SpecErrorKind kind, const std::string& what)
        : std::invalid_argument(what), kind_(kind) {}
    SpecErrorKind kind() const noexcept { return kind_; }

  private:
    SpecErrorKind kind_;
};

/// Binary inner/outer product in index notation. Each label is one
/// lowercase letter naming one index position of its operand.
struct ContractionSpec {
    std::string a_labels;
    std::string b_labels;
    std::string contracted; ///< shared labels, in order of appearance in A
    std::string free_a;     ///< A-only labels, in A's order
    std::string free_b;     ///< B-only labels, in B's order
    std::string output;     ///< labels of the result, one per result index position

    friend bool operator==(const ContractionSpec&, const ContractionSpec&) = default;
};

} // namespace lcot
