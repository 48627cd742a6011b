#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "lcot/contraction.hpp"
#include "lcot/matview.hpp"

namespace lcot {

enum class KernelChoice { CSC, CSR, DCSC, DCSR, CSCNA, CSRNA, SOP };

std::string_view kernel_name(KernelChoice k);
/// Operand layouts a kernel consumes: {A, B}. The result has A's major
/// except for SOP, whose result is column-major.
std::pair<Major, Major> kernel_layouts(KernelChoice k);
Major kernel_output_major(KernelChoice k);

struct MultiplyStats {
    /// Work for one output column (column kernels) or row (row kernels).
    struct Segment {
        Index id;
        std::int64_t flops;
        std::int64_t nnz;
    };

    std::int64_t flops = 0;
    std::vector<Segment> segments;
    KernelChoice kernel = KernelChoice::CSC;
    int rearrangements = 0;
};

/// Kernel for the given operand classes (rows: A, columns: B). `prefer`
/// settles the CSC/CSR-style tie cells in favour of the layout needing fewer
/// rearrangements; without it, column kernels win when n > m.
KernelChoice dispatch(SparsityClass a, SparsityClass b, Index m, Index n,
                      std::optional<Major> prefer = std::nullopt);
/// Same, checking that the inner dimensions agree.
KernelChoice dispatch(const HyperSparsityProfile& a, const HyperSparsityProfile& b,
                      std::optional<Major> prefer = std::nullopt);

// Matrix kernels. The result view has rows = A.rows and cols = B.cols; its
// position lists are left empty for the caller to fill.
MatrixView csc_mult(const CompressedMatrix& a, const MatrixView& b, MultiplyStats* stats = nullptr);
MatrixView csr_mult(const MatrixView& a, const CompressedMatrix& b, MultiplyStats* stats = nullptr);
MatrixView dcsc_mult(const CompressedMatrix& a, const MatrixView& b, MultiplyStats* stats = nullptr);
MatrixView dcsr_mult(const MatrixView& a, const CompressedMatrix& b, MultiplyStats* stats = nullptr);
MatrixView cscna_mult(const CompressedMatrix& a, const MatrixView& b,
                      MultiplyStats* stats = nullptr);
MatrixView csrna_mult(const MatrixView& a, const CompressedMatrix& b,
                      MultiplyStats* stats = nullptr);
MatrixView sop_mult(const MatrixView& a, const MatrixView& b, MultiplyStats* stats = nullptr);

/// Converts the operand the kernel compresses and runs it. Operands must
/// already be in the layouts returned by kernel_layouts().
MatrixView multiply_views(KernelChoice k, const MatrixView& a, const MatrixView& b,
                          MultiplyStats* stats = nullptr);

struct MultiplyOptions {
    double threshold = kHyperSparseThreshold;
    std::optional<KernelChoice> force_kernel;
};

/// Flatten, dispatch, multiply and map back. The result's index positions
/// follow `spec.output`; it is sorted under the lex order of the kernel's
/// output layout, so no permutation is spent on the result.
std::pair<SparseTensor, MultiplyStats> poly_multiply(const SparseTensor& a, const SparseTensor& b,
                                                     const ContractionSpec& spec,
                                                     MultiplyOptions opts = {});

/// Baseline strategy: excise the empty rows and columns of the left operand
/// with consistent relabelling of the shared dimension, then run CSC. The
/// result is in column-major layout order.
std::pair<SparseTensor, MultiplyStats>
excision_baseline_multiply(const SparseTensor& a, const SparseTensor& b,
                           const ContractionSpec& spec);

} // namespace lcot
