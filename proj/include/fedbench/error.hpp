#pragma once

#include <stdexcept>
#include <string>

namespace fedbench {

enum class ErrorKind {
  Config,
  Data,
  Schema,
  Shape,
  Domain,
  Alignment,
  Checkpoint,
  EmptySplit,
  EmptyBatch,
  Numerics,
  UndefinedKappa,
  UndefinedAuc,
  MessageTooLarge,
  RuntimeBudget,
  Io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string msg) : std::runtime_error(std::move(msg)), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

#define FEDBENCH_DEFINE_ERROR(Name, Kind)                                      \
  class Name : public Error {                                                  \
   public:                                                                     \
    explicit Name(std::string msg) : Error(ErrorKind::Kind, std::move(msg)) {} \
  }

FEDBENCH_DEFINE_ERROR(ConfigError, Config);
FEDBENCH_DEFINE_ERROR(DataError, Data);
FEDBENCH_DEFINE_ERROR(SchemaError, Schema);
FEDBENCH_DEFINE_ERROR(ShapeError, Shape);
FEDBENCH_DEFINE_ERROR(DomainError, Domain);
FEDBENCH_DEFINE_ERROR(AlignmentError, Alignment);
FEDBENCH_DEFINE_ERROR(CheckpointError, Checkpoint);
FEDBENCH_DEFINE_ERROR(EmptySplitError, EmptySplit);
FEDBENCH_DEFINE_ERROR(EmptyBatchError, EmptyBatch);
FEDBENCH_DEFINE_ERROR(NumericsError, Numerics);
FEDBENCH_DEFINE_ERROR(UndefinedKappaError, UndefinedKappa);
FEDBENCH_DEFINE_ERROR(UndefinedAucError, UndefinedAuc);
FEDBENCH_DEFINE_ERROR(MessageTooLargeError, MessageTooLarge);
FEDBENCH_DEFINE_ERROR(IoError, Io);

#undef FEDBENCH_DEFINE_ERROR

// Process exit code / C API status for an error category.
// 2 = config, 3 = budget violation, 4 = data/domain problem.
inline int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Config:
      return 2;
    case ErrorKind::MessageTooLarge:
    case ErrorKind::RuntimeBudget:
      return 3;
    default:
      return 4;
  }
}

}  // namespace fedbench
