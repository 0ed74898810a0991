#include "quatlat/error.hpp"

namespace quatlat {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::FieldMismatch: return "FieldMismatch";
    case ErrorKind::NotPresent: return "NotPresent";
    case ErrorKind::NoEmbedding: return "NoEmbedding";
    case ErrorKind::PrecisionExhausted: return "PrecisionExhausted";
    case ErrorKind::AlgebraMismatch: return "AlgebraMismatch";
    case ErrorKind::ZeroDivisor: return "ZeroDivisor";
    case ErrorKind::ZeroParameter: return "ZeroParameter";
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::NotIntegralGenerator: return "NotIntegralGenerator";
    case ErrorKind::NotFullRank: return "NotFullRank";
    case ErrorKind::NoClosure: return "NoClosure";
    case ErrorKind::NotCompatible: return "NotCompatible";
    case ErrorKind::UnsupportedAlgebra: return "UnsupportedAlgebra";
    case ErrorKind::NotIdeal: return "NotIdeal";
    case ErrorKind::FactoringIncomplete: return "FactoringIncomplete";
    case ErrorKind::NotDefinite: return "NotDefinite";
    case ErrorKind::NotEmbeddable: return "NotEmbeddable";
    case ErrorKind::SearchExhausted: return "SearchExhausted";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::UnknownSymbol: return "UnknownSymbol";
    case ErrorKind::SchemaError: return "SchemaError";
    case ErrorKind::Internal: return "Internal";
  }
  return "Unknown";
}

}  // namespace quatlat
