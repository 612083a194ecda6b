#include "structpca/errors.hpp"

namespace structpca {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::invalid_argument: return "InvalidArgument";
    case Errc::non_square: return "NonSquare";
    case Errc::not_symmetric: return "NotSymmetric";
    case Errc::failed_to_converge: return "FailedToConverge";
    case Errc::empty_null_space: return "EmptyNullSpace";
    case Errc::rank_deficient: return "RankDeficient";
    case Errc::rank_deficient_base: return "RankDeficientBase";
    case Errc::support_out_of_range: return "SupportOutOfRange";
    case Errc::structure_infeasible: return "StructureInfeasible";
    case Errc::too_few_samples: return "TooFewSamples";
    case Errc::degenerate_covariance: return "DegenerateCovariance";
    case Errc::degenerate_signal: return "DegenerateSignal";
    case Errc::known_rows_rank_deficient: return "KnownRowsRankDeficient";
    case Errc::dimension_mismatch: return "DimensionMismatch";
    case Errc::shape_mismatch: return "ShapeMismatch";
    case Errc::rank_deficient_estimate: return "RankDeficientEstimate";
    case Errc::length_mismatch: return "LengthMismatch";
    case Errc::unknown_case: return "UnknownCase";
    case Errc::io_error: return "IoError";
    case Errc::parse_error: return "ParseError";
  }
  return "UnknownError";
}

}  // namespace structpca
