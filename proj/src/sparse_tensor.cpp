#include "lcot/sparse_tensor.hpp"

#include <bit>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "lcot/rearrange.hpp"

namespace lcot {

SparseTensor::SparseTensor(Shape shape, LexOrder lex, std::vector<Liv> livs,
                           std::vector<double> vals, bool is_sorted)
    : shape_(std::move(shape)), lex_(std::move(lex)), livs_(std::move(livs)),
      vals_(std::move(vals)), sorted_(is_sorted) {
    if (lex_.order() != shape_.order()) {
        throw std::invalid_argument("SparseTensor: lex order and shape have different orders");
    }
    if (livs_.size() != vals_.size()) {
        throw std::invalid_argument("SparseTensor: livs and vals differ in length");
    }
    const Index size = shape_.size();
    for (std::size_t e = 0; e < livs_.size(); ++e) {
        if (livs_[e] < 0 || livs_[e] >= size) {
            throw std::out_of_range("SparseTensor: LIV " + std::to_string(livs_[e]) +
                                    " invalid for shape");
        }
        if (sorted_ && e > 0 && livs_[e] <= livs_[e - 1]) {
            throw std::invalid_argument("SparseTensor: sorted tensor needs strictly increasing LIVs");
        }
    }
}

SparseTensor::SparseTensor(Shape shape, LexOrder lex)
    : SparseTensor(std::move(shape), std::move(lex), {}, {}, true) {}

std::pair<std::vector<Liv>, std::vector<double>> SparseTensor::release() && {
    sorted_ = true;
    return {std::move(livs_), std::move(vals_)};
}

SparseTensor TensorBuilder::adopt(Shape shape, LexOrder lex, std::vector<Liv> livs,
                                  std::vector<double> vals, bool is_sorted) {
    SparseTensor t;
    t.shape_ = std::move(shape);
    t.lex_ = std::move(lex);
    t.livs_ = std::move(livs);
    t.vals_ = std::move(vals);
    t.sorted_ = is_sorted;
    return t;
}

SparseTensor from_entries(const Shape& shape, const LexOrder& lex,
                          const std::vector<Entry>& entries) {
    const LivCodec codec(shape, lex);
    std::vector<Liv> livs;
    std::vector<double> vals;
    livs.reserve(entries.size());
    vals.reserve(entries.size());
    for (const Entry& e : entries) {
        livs.push_back(codec.encode(e.coords));
        vals.push_back(e.value);
    }
    return sort_tensor(TensorBuilder::adopt(shape, lex, std::move(livs), std::move(vals), false));
}

LivShuffler::LivShuffler(const Shape& shape, const LexOrder& from, const LexOrder& to) {
    const LivCodec dst(shape, to);
    // Digit q of the old LIV (least significant first) moves to its stride
    // under the new order.
    for (std::size_t q = 0; q < shape.order(); ++q) {
        div_.emplace_back(shape[from[q]]);
        target_.push_back(dst.stride(from[q]));
    }
}

void shuffle_in_place(std::span<Liv> livs, const Shape& shape, const LexOrder& from,
                      const LexOrder& to) {
    if (from == to) {
        return;
    }
    const LivShuffler shuffle(shape, from, to);
    for (Liv& liv : livs) {
        liv = shuffle(liv);
    }
}

SparseTensor shuffle_livs(const SparseTensor& t, const LexOrder& new_lex) {
    if (new_lex.order() != t.order()) {
        throw std::invalid_argument("shuffle_livs: lex order has wrong length");
    }
    if (new_lex == t.lex()) {
        return t;
    }
    std::vector<Liv> livs = t.livs();
    shuffle_in_place(livs, t.shape(), t.lex(), new_lex);
    return TensorBuilder::adopt(t.shape(), new_lex, std::move(livs), t.vals(), false);
}

std::vector<Entry> to_entries(const SparseTensor& t) {
    const LivCodec codec(t.shape(), t.lex());
    std::vector<Entry> out;
    out.reserve(t.nnz());
    for (std::size_t e = 0; e < t.nnz(); ++e) {
        Entry entry{std::vector<Index>(t.order()), t.vals()[e]};
        codec.decode(t.livs()[e], entry.coords);
        out.push_back(std::move(entry));
    }
    return out;
}

SparseTensor prune_zeros(const SparseTensor& t) {
    std::vector<Liv> livs;
    std::vector<double> vals;
    for (std::size_t e = 0; e < t.nnz(); ++e) {
        if (t.vals()[e] != 0.0) {
            livs.push_back(t.livs()[e]);
            vals.push_back(t.vals()[e]);
        }
    }
    return TensorBuilder::adopt(t.shape(), t.lex(), std::move(livs), std::move(vals),
                                t.is_sorted());
}

SparseTensor relabel_positions(const SparseTensor& t, const std::vector<int>& perm) {
    if (perm.size() != t.order()) {
        throw std::invalid_argument("relabel_positions: permutation has wrong length");
    }
    // LexOrder validates that perm is a bijection.
    const LexOrder as_lex(perm);
    std::vector<int> inverse(perm.size());
    std::vector<Index> dims(perm.size());
    for (std::size_t p = 0; p < perm.size(); ++p) {
        inverse[perm[p]] = static_cast<int>(p);
        dims[p] = t.shape()[perm[p]];
    }
    std::vector<int> seq(perm.size());
    for (std::size_t q = 0; q < perm.size(); ++q) {
        seq[q] = inverse[t.lex()[q]];
    }
    return TensorBuilder::adopt(Shape(std::move(dims)), LexOrder(std::move(seq)), t.livs(),
                                t.vals(), t.is_sorted());
}

namespace {

struct Fnv1a {
    std::uint64_t h = 0xcbf29ce484222325ull;
    void add(std::uint64_t x) {
        for (int b = 0; b < 8; ++b) {
            h ^= (x >> (8 * b)) & 0xffu;
            h *= 0x100000001b3ull;
        }
    }
};

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

[[noreturn]] void bad_ntf1(const std::string& what) {
    throw std::runtime_error("NTF1: " + what);
}

std::vector<std::string> split_line(std::istream& is, const char* what) {
    std::string line;
    if (!std::getline(is, line)) {
        bad_ntf1(std::string("unexpected end of input reading ") + what);
    }
    std::istringstream ss(line);
    std::vector<std::string> tokens;
    std::string tok;
    while (ss >> tok) {
        tokens.push_back(tok);
    }
    return tokens;
}

template <class T>
T parse_number(const std::string& tok, const char* what) {
    T v{};
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size()) {
        bad_ntf1(std::string("malformed ") + what + " '" + tok + "'");
    }
    return v;
}

} // namespace

std::uint64_t checksum(const SparseTensor& t) {
    Fnv1a f;
    for (Index d : t.shape().dims()) {
        f.add(static_cast<std::uint64_t>(d));
    }
    for (int p : t.lex().seq()) {
        f.add(static_cast<std::uint64_t>(p));
    }
    for (std::size_t e = 0; e < t.nnz(); ++e) {
        f.add(static_cast<std::uint64_t>(t.livs()[e]));
        f.add(std::bit_cast<std::uint64_t>(t.vals()[e]));
    }
    return f.h;
}

void write_ntf1(std::ostream& os, const SparseTensor& t) {
    os << "NTF1\n" << t.order() << '\n';
    for (std::size_t p = 0; p < t.order(); ++p) {
        os << (p ? " " : "") << t.shape()[p];
    }
    os << '\n';
    for (std::size_t q = 0; q < t.order(); ++q) {
        os << (q ? " " : "") << t.lex()[q];
    }
    os << '\n' << t.nnz() << '\n';
    for (std::size_t e = 0; e < t.nnz(); ++e) {
        os << t.livs()[e] << ' ' << format_double(t.vals()[e]) << '\n';
    }
}

SparseTensor read_ntf1(std::istream& is) {
    auto magic = split_line(is, "header");
    if (magic.size() != 1 || magic[0] != "NTF1") {
        bad_ntf1("missing NTF1 header");
    }
    auto order_line = split_line(is, "order");
    if (order_line.size() != 1) {
        bad_ntf1("order line must hold one integer");
    }
    const auto order = parse_number<long long>(order_line[0], "order");
    if (order < 1) {
        bad_ntf1("order must be >= 1");
    }
    auto dim_line = split_line(is, "dims");
    auto lex_line = split_line(is, "lex order");
    if (dim_line.size() != static_cast<std::size_t>(order) ||
        lex_line.size() != static_cast<std::size_t>(order)) {
        bad_ntf1("dims and lex order must each list " + std::to_string(order) + " values");
    }
    std::vector<Index> dims;
    std::vector<int> seq;
    for (long long p = 0; p < order; ++p) {
        dims.push_back(parse_number<Index>(dim_line[p], "dim"));
        seq.push_back(parse_number<int>(lex_line[p], "lex position"));
    }
    auto nnz_line = split_line(is, "nnz");
    if (nnz_line.size() != 1) {
        bad_ntf1("nnz line must hold one integer");
    }
    const auto nnz = parse_number<long long>(nnz_line[0], "nnz");
    if (nnz < 0) {
        bad_ntf1("nnz must be >= 0");
    }
    std::vector<Liv> livs;
    std::vector<double> vals;
    livs.reserve(static_cast<std::size_t>(nnz));
    vals.reserve(static_cast<std::size_t>(nnz));
    bool increasing = true;
    for (long long e = 0; e < nnz; ++e) {
        auto toks = split_line(is, "element");
        if (toks.size() != 2) {
            bad_ntf1("element line " + std::to_string(e) + " must be '<liv> <value>'");
        }
        livs.push_back(parse_number<Liv>(toks[0], "liv"));
        vals.push_back(parse_number<double>(toks[1], "value"));
        if (e > 0 && livs[e] <= livs[e - 1]) {
            increasing = false;
        }
    }
    std::string rest;
    while (std::getline(is, rest)) {
        if (rest.find_first_not_of(" \t\r") != std::string::npos) {
            bad_ntf1("trailing data after last element");
        }
    }
    // Shape/LexOrder/SparseTensor constructors check the remaining invariants.
    return SparseTensor(Shape(std::move(dims)), LexOrder(std::move(seq)), std::move(livs),
                        std::move(vals), increasing);
}

void save_ntf1(const std::string& path, const SparseTensor& t) {
    std::ofstream os(path);
    if (!os) {
        throw std::runtime_error("cannot open '" + path + "' for writing");
    }
    write_ntf1(os, t);
}

SparseTensor load_ntf1(const std::string& path) {
    std::ifstream is(path);
    if (!is) {
        throw std::runtime_error("cannot open '" + path + "'");
    }
    return read_ntf1(is);
}

} // namespace lcot
