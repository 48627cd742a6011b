#include "lcot/matview.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace lcot {

namespace {

Index extent(const Shape& shape, const std::vector<int>& positions) {
    Index e = 1;
    for (int p : positions) {
        e = checked_mul(e, shape[p]);
    }
    return e;
}

void check_partition(std::size_t order, const std::vector<int>& rows,
                     const std::vector<int>& cols) {
    std::vector<bool> seen(order, false);
    auto mark = [&](int p) {
        if (p < 0 || static_cast<std::size_t>(p) >= order) {
            throw std::invalid_argument("flatten: index position " + std::to_string(p) +
                                        " out of range");
        }
        if (seen[p]) {
            throw std::invalid_argument("flatten: index position " + std::to_string(p) +
                                        " mapped twice");
        }
        seen[p] = true;
    };
    std::for_each(rows.begin(), rows.end(), mark);
    std::for_each(cols.begin(), cols.end(), mark);
    if (rows.size() + cols.size() != order) {
        throw std::invalid_argument("flatten: row and column positions must cover every index");
    }
}

} // namespace

void validate(const MatrixView& mv) {
    if (mv.livs.size() != mv.vals.size()) {
        throw precondition_error("MatrixView: livs and vals differ in length");
    }
    if (mv.rows < 1 || mv.cols < 1) {
        throw precondition_error("MatrixView: empty dimension");
    }
    const Index size = checked_mul(mv.rows, mv.cols);
    for (std::size_t e = 0; e < mv.livs.size(); ++e) {
        if (mv.livs[e] < 0 || mv.livs[e] >= size) {
            throw precondition_error("MatrixView: LIV outside the matrix");
        }
        if (e > 0 && mv.livs[e] <= mv.livs[e - 1]) {
            throw precondition_error("MatrixView: pairs not strictly increasing");
        }
    }
}

LexOrder layout_lex(const std::vector<int>& rows, const std::vector<int>& cols, Major major) {
    std::vector<int> seq;
    seq.reserve(rows.size() + cols.size());
    const auto& minor = major == Major::ColMajor ? rows : cols;
    const auto& major_pos = major == Major::ColMajor ? cols : rows;
    seq.insert(seq.end(), minor.begin(), minor.end());
    seq.insert(seq.end(), major_pos.begin(), major_pos.end());
    return LexOrder(std::move(seq));
}

bool is_zero_copy(const SparseTensor& t, const std::vector<int>& rows,
                  const std::vector<int>& cols, Major major) {
    return t.is_sorted() && t.lex() == layout_lex(rows, cols, major);
}

MatrixView flatten(SparseTensor&& t, const std::vector<int>& rows, const std::vector<int>& cols,
                   Major major) {
    check_partition(t.order(), rows, cols);
    MatrixView mv;
    mv.row_positions = rows;
    mv.col_positions = cols;
    mv.rows = extent(t.shape(), rows);
    mv.cols = extent(t.shape(), cols);
    mv.major = major;

    const LexOrder lex = layout_lex(rows, cols, major);
    SparseTensor arranged = t.is_sorted() ? rp_permute(std::move(t), lex)
                                          : sort_tensor(shuffle_livs(t, lex));
    auto [livs, vals] = std::move(arranged).release();
    mv.livs = std::move(livs);
    mv.vals = std::move(vals);
    return mv;
}

MatrixView flatten(const SparseTensor& t, const std::vector<int>& rows,
                   const std::vector<int>& cols, Major major) {
    return flatten(SparseTensor(t), rows, cols, major);
}

SparseTensor unflatten(MatrixView mv, const Shape& out_shape) {
    if (mv.row_positions.size() + mv.col_positions.size() != out_shape.order()) {
        throw std::invalid_argument("unflatten: positions do not match output order");
    }
    check_partition(out_shape.order(), mv.row_positions, mv.col_positions);
    if (extent(out_shape, mv.row_positions) != mv.rows ||
        extent(out_shape, mv.col_positions) != mv.cols) {
        throw std::invalid_argument("unflatten: matrix dimensions do not match output shape");
    }
    LexOrder lex = layout_lex(mv.row_positions, mv.col_positions, mv.major);
    return TensorBuilder::adopt(out_shape, std::move(lex), std::move(mv.livs),
                                std::move(mv.vals), true);
}

SparseTensor unflatten(MatrixView mv, const Shape& out_shape, const LexOrder& out_lex) {
    return rp_permute(unflatten(std::move(mv), out_shape), out_lex);
}

SparsityClass classify_counts(Index m, Index n, std::size_t nnz, double threshold) {
    if (nnz == 0) {
        return SparsityClass::Sparse;
    }
    const double z = static_cast<double>(nnz);
    const bool row_sparse = static_cast<double>(m) / z > threshold;
    const bool col_sparse = static_cast<double>(n) / z > threshold;
    if (row_sparse && col_sparse) {
        return SparsityClass::IndexSparse;
    }
    if (row_sparse) {
        return SparsityClass::RowSparse;
    }
    if (col_sparse) {
        return SparsityClass::ColSparse;
    }
    return SparsityClass::Sparse;
}

HyperSparsityProfile classify(const MatrixView& mv, double threshold) {
    HyperSparsityProfile prof;
    prof.nnz = mv.nnz();
    prof.m = mv.rows;
    prof.n = mv.cols;
    prof.cls = classify_counts(mv.rows, mv.cols, mv.nnz(), threshold);
    if (mv.nnz() == 0) {
        return prof;
    }
    const Index minor_size = mv.minor_size();
    const FastDivisor div(minor_size);
    Index majors = 0;
    Liv threshold_liv = 0;
    const std::size_t nnz = mv.nnz();
    std::vector<Index> minor_ids;
    const bool use_bitmap = static_cast<std::uint64_t>(minor_size) <= 64 * nnz;
    std::vector<std::uint64_t> bitmap(use_bitmap ? static_cast<std::size_t>(minor_size / 64 + 1) : 0);
    if (!use_bitmap) {
        minor_ids.reserve(nnz);
    }
    for (std::size_t e = 0; e < nnz; ++e) {
        const auto dm = div.divmod(mv.livs[e]);
        if (e == 0 || mv.livs[e] >= threshold_liv) {
            ++majors;
            threshold_liv = (dm.quotient + 1) * minor_size;
        }
        if (use_bitmap) {
            bitmap[dm.remainder / 64] |= std::uint64_t{1} << (dm.remainder % 64);
        } else {
            minor_ids.push_back(dm.remainder);
        }
    }
    Index minors = 0;
    if (use_bitmap) {
        for (std::uint64_t w : bitmap) {
            minors += std::popcount(w);
        }
    } else {
        msd_radix_sort(std::span<Index>(minor_ids));
        minors = static_cast<Index>(std::unique(minor_ids.begin(), minor_ids.end()) -
                                    minor_ids.begin());
    }
    if (mv.major == Major::ColMajor) {
        prof.nzc = majors;
        prof.nzr = minors;
    } else {
        prof.nzr = majors;
        prof.nzc = minors;
    }
    return prof;
}

namespace {

CompressedMatrix compress(const MatrixView& mv, MatrixFormat format) {
    const bool col_based = format == MatrixFormat::CSC || format == MatrixFormat::DCSC;
    const bool doubly = format == MatrixFormat::DCSC || format == MatrixFormat::DCSR;
    if (mv.major != (col_based ? Major::ColMajor : Major::RowMajor)) {
        throw precondition_error(col_based
                                     ? "CSC/DCSC conversion needs a column-major view"
                                     : "CSR/DCSR conversion needs a row-major view");
    }
    CompressedMatrix cm;
    cm.format = format;
    cm.rows = mv.rows;
    cm.cols = mv.cols;
    const std::size_t nnz = mv.nnz();
    const Index minor_size = mv.minor_size();
    const FastDivisor div(minor_size);
    cm.minor.resize(nnz);
    cm.vals.assign(mv.vals.begin(), mv.vals.end());
    if (doubly) {
        cm.ptr.push_back(0);
        Liv next_segment = 0;
        for (std::size_t e = 0; e < nnz; ++e) {
            const auto dm = div.divmod(mv.livs[e]);
            if (e == 0 || mv.livs[e] >= next_segment) {
                if (e != 0) {
                    cm.ptr.push_back(static_cast<Index>(e));
                }
                cm.ids.push_back(dm.quotient);
                next_segment = (dm.quotient + 1) * minor_size;
            }
            cm.minor[e] = dm.remainder;
        }
        if (nnz != 0) {
            cm.ptr.push_back(static_cast<Index>(nnz));
        }
        return cm;
    }
    cm.ptr.assign(static_cast<std::size_t>(mv.major_size()) + 1, 0);
    for (std::size_t e = 0; e < nnz; ++e) {
        const auto dm = div.divmod(mv.livs[e]);
        ++cm.ptr[static_cast<std::size_t>(dm.quotient) + 1];
        cm.minor[e] = dm.remainder;
    }
    for (std::size_t s = 1; s < cm.ptr.size(); ++s) {
        cm.ptr[s] += cm.ptr[s - 1];
    }
    return cm;
}

} // namespace

CompressedMatrix to_csc(const MatrixView& mv) { return compress(mv, MatrixFormat::CSC); }
CompressedMatrix to_csr(const MatrixView& mv) { return compress(mv, MatrixFormat::CSR); }
CompressedMatrix to_dcsc(const MatrixView& mv) { return compress(mv, MatrixFormat::DCSC); }
CompressedMatrix to_dcsr(const MatrixView& mv) { return compress(mv, MatrixFormat::DCSR); }

MatrixView expand(const CompressedMatrix& cm) {
    MatrixView mv;
    mv.rows = cm.rows;
    mv.cols = cm.cols;
    const bool col_based = cm.format == MatrixFormat::CSC || cm.format == MatrixFormat::DCSC;
    mv.major = col_based ? Major::ColMajor : Major::RowMajor;
    const Index minor_size = mv.minor_size();
    mv.livs.reserve(cm.nnz());
    for (std::size_t s = 0; s < cm.segments(); ++s) {
        const Index id = cm.segment_id(s);
        for (Index p = cm.ptr[s]; p < cm.ptr[s + 1]; ++p) {
            mv.livs.push_back(cm.minor[p] + minor_size * id);
        }
    }
    mv.vals.assign(cm.vals.begin(), cm.vals.end());
    return mv;
}

} // namespace lcot
