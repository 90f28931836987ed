#pragma once

#include <stdexcept>
#include <string>

namespace taglm {

// Every failure surfaced by the library derives from Error. The CLI maps the
// concrete type onto an exit code, so the hierarchy carries a coarse category.
enum class ErrorCategory { Usage, Io, Numeric };

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}
  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

#define TAGLM_DEFINE_ERROR(Name, Category)                                   \
  class Name : public Error {                                                \
   public:                                                                   \
    explicit Name(const std::string& what) : Error(Category, what) {}        \
  }

// tag grammar
TAGLM_DEFINE_ERROR(MalformedTag, ErrorCategory::Usage);
TAGLM_DEFINE_ERROR(UnknownLevel, ErrorCategory::Usage);
// corpus
TAGLM_DEFINE_ERROR(ConfigError, ErrorCategory::Usage);
TAGLM_DEFINE_ERROR(IoError, ErrorCategory::Io);
TAGLM_DEFINE_ERROR(CsvFormatError, ErrorCategory::Usage);
TAGLM_DEFINE_ERROR(SplitError, ErrorCategory::Usage);
// tokenizer
TAGLM_DEFINE_ERROR(EmptyCorpus, ErrorCategory::Usage);
TAGLM_DEFINE_ERROR(UnknownChar, ErrorCategory::Usage);
TAGLM_DEFINE_ERROR(TagTooLong, ErrorCategory::Usage);
// nn core / trainer
TAGLM_DEFINE_ERROR(DimensionMismatch, ErrorCategory::Usage);
TAGLM_DEFINE_ERROR(NonFiniteLoss, ErrorCategory::Numeric);
TAGLM_DEFINE_ERROR(FormatVersionMismatch, ErrorCategory::Io);
TAGLM_DEFINE_ERROR(ChecksumMismatch, ErrorCategory::Io);

#undef TAGLM_DEFINE_ERROR

}  // namespace taglm
