#include "lcot/einsum.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>
#include <string>

#include "lcot/rearrange.hpp"

namespace lcot {

namespace {

bool has(const std::string& s, char c) { return s.find(c) != std::string::npos; }

void check_unique(const std::string& labels, const char* where) {
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels.find(labels[i], i + 1) != std::string::npos) {
            throw spec_error(SpecErrorKind::RepeatedLabel,
                             std::string("label '") + labels[i] + "' repeated in " + where +
                                 " (diagonals are not supported)");
        }
    }
}

} // namespace

ContractionSpec parse_spec(std::string_view expr) {
    std::string compact;
    for (char c : expr) {
        if (!std::isspace(static_cast<unsigned char>(c))) {
            compact += c;
        }
    }
    std::string inputs = compact;
    std::string output;
    bool explicit_output = false;
    if (const auto arrow = compact.find("->"); arrow != std::string::npos) {
        inputs = compact.substr(0, arrow);
        output = compact.substr(arrow + 2);
        explicit_output = true;
    }
    const auto comma = inputs.find(',');
    if (comma == std::string::npos || inputs.find(',', comma + 1) != std::string::npos) {
        throw spec_error(SpecErrorKind::Syntax, "expected exactly two operands in '" +
                                                    std::string(expr) + "'");
    }
    ContractionSpec spec;
    spec.a_labels = inputs.substr(0, comma);
    spec.b_labels = inputs.substr(comma + 1);
    auto check_chars = [&](const std::string& s, bool allow_empty) {
        if (s.empty() && !allow_empty) {
            throw spec_error(SpecErrorKind::Syntax, "empty operand in '" + std::string(expr) + "'");
        }
        for (char c : s) {
            if (c < 'a' || c > 'z') {
                throw spec_error(SpecErrorKind::Syntax,
                                 std::string("invalid character '") + c + "' in '" +
                                     std::string(expr) + "'");
            }
        }
    };
    check_chars(spec.a_labels, false);
    check_chars(spec.b_labels, false);
    check_chars(output, true);
    check_unique(spec.a_labels, "the first operand");
    check_unique(spec.b_labels, "the second operand");
    check_unique(output, "the output");

    for (char l : spec.a_labels) {
        (has(spec.b_labels, l) ? spec.contracted : spec.free_a) += l;
    }
    for (char l : spec.b_labels) {
        if (!has(spec.a_labels, l)) {
            spec.free_b += l;
        }
    }
    if (!explicit_output) {
        spec.output = spec.free_a + spec.free_b;
        return spec;
    }
    for (char l : output) {
        if (has(spec.contracted, l)) {
            throw spec_error(SpecErrorKind::Entrywise,
                             std::string("label '") + l +
                                 "' appears in both operands and the output (entrywise "
                                 "products are not supported)");
        }
        if (!has(spec.free_a, l) && !has(spec.free_b, l)) {
            throw spec_error(SpecErrorKind::UnknownOutput,
                             std::string("output label '") + l + "' not found in any operand");
        }
    }
    for (char l : spec.free_a + spec.free_b) {
        if (!has(output, l)) {
            throw spec_error(SpecErrorKind::MissingOutput,
                             std::string("label '") + l +
                                 "' occurs in one operand only but is missing from the output");
        }
    }
    spec.output = output;
    return spec;
}

SparseTensor contract(const SparseTensor& a, const SparseTensor& b, const ContractionSpec& spec,
                      MultiplyStats* stats) {
    auto [out, st] = poly_multiply(a, b, spec);
    if (stats != nullptr) {
        *stats = std::move(st);
    }
    return canonical(out);
}

SparseTensor contract(const SparseTensor& a, const SparseTensor& b, std::string_view expr,
                      MultiplyStats* stats) {
    return contract(a, b, parse_spec(expr), stats);
}

AdditionMatch AdditionMatch::identity(std::size_t order) {
    AdditionMatch m;
    m.perm.resize(order);
    for (std::size_t p = 0; p < order; ++p) {
        m.perm[p] = static_cast<int>(p);
    }
    return m;
}

SparseTensor add(const SparseTensor& a, const SparseTensor& b, const AdditionMatch& match,
                 int sign) {
    if (sign != 1 && sign != -1) {
        throw std::invalid_argument("add: sign must be +1 or -1");
    }
    if (match.perm.size() != b.order() || a.order() != b.order()) {
        throw std::invalid_argument("add: operands differ in order");
    }
    SparseTensor rb = relabel_positions(b, match.perm);
    if (!(rb.shape() == a.shape())) {
        throw std::invalid_argument("add: matched dimensions differ");
    }
    rb = rb.is_sorted() ? rp_permute(std::move(rb), a.lex()) : sort_tensor(shuffle_livs(rb, a.lex()));
    const SparseTensor sa = a.is_sorted() ? SparseTensor() : sort_tensor(a);
    const SparseTensor& ta = a.is_sorted() ? a : sa;

    const auto& la = ta.livs();
    const auto& va = ta.vals();
    const auto& lb = rb.livs();
    const auto& vb = rb.vals();
    const double s = sign;
    std::vector<Liv> livs;
    std::vector<double> vals;
    livs.reserve(la.size() + lb.size());
    vals.reserve(la.size() + lb.size());
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < la.size() || j < lb.size()) {
        if (j == lb.size() || (i < la.size() && la[i] < lb[j])) {
            livs.push_back(la[i]);
            vals.push_back(va[i++]);
        } else if (i == la.size() || lb[j] < la[i]) {
            livs.push_back(lb[j]);
            vals.push_back(s * vb[j++]);
        } else {
            livs.push_back(la[i]);
            vals.push_back(va[i++] + s * vb[j++]);
        }
    }
    return TensorBuilder::adopt(a.shape(), a.lex(), std::move(livs), std::move(vals), true);
}

std::uint64_t partial_permutation_count(int n) {
    if (n < 0) {
        throw std::invalid_argument("partial_permutation_count: negative order");
    }
    std::uint64_t total = 0;
    std::uint64_t fact = 1;  // i!
    std::uint64_t binom = 1; // C(n, i)
    for (int i = 0; i <= n; ++i) {
        if (i > 0) {
            if (__builtin_mul_overflow(fact, static_cast<std::uint64_t>(i), &fact)) {
                throw std::overflow_error("partial_permutation_count: result exceeds 64 bits");
            }
            // C(n, i) = C(n, i-1) * (n-i+1) / i, exact at each step.
            unsigned __int128 next = static_cast<unsigned __int128>(binom) * (n - i + 1) / i;
            if (next > UINT64_MAX) {
                throw std::overflow_error("partial_permutation_count: result exceeds 64 bits");
            }
            binom = static_cast<std::uint64_t>(next);
        }
        std::uint64_t term;
        if (__builtin_mul_overflow(binom, binom, &term) ||
            __builtin_mul_overflow(term, fact, &term) || __builtin_add_overflow(total, term, &total)) {
            throw std::overflow_error("partial_permutation_count: result exceeds 64 bits");
        }
    }
    return total;
}

} // namespace lcot
