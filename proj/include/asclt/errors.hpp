#pragma once

#include <stdexcept>
#include <string>

namespace asclt {

/// Base class for all toolkit errors.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid geometric or numeric input (empty region, bad parameter, duplicate point).
class domain_error : public error {
 public:
  using error::error;
};

/// A scaled window is not covered by the master sample. Never silently truncate.
class coverage_error : public error {
 public:
  using error::error;
};

/// Configuration file or override cannot be parsed / validated.
class config_error : public error {
 public:
  using error::error;
};

/// A required input artifact (e.g. calibration table) is missing or incompatible.
class dependency_error : public error {
 public:
  using error::error;
};

/// The model is degenerate for the requested operation (zero variance, too few points).
class degenerate_error : public error {
 public:
  using error::error;
};

/// Too little replication budget to produce a meaningful estimate.
class precision_error : public error {
 public:
  using error::error;
};

/// The requested evaluation method does not apply (e.g. exact 2-D geometry in d != 2).
class method_error : public error {
 public:
  using error::error;
};

/// Decay fitting rejected because the data carry no decay signal.
class flat_data_error : public error {
 public:
  using error::error;
};

/// Operation is outside this artifact's supported surface.
class unsupported_error : public error {
 public:
  using error::error;
};

}  // namespace asclt
