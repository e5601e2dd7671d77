#pragma once

#include <stdexcept>
#include <string>

namespace cqed
{

struct Error : std::runtime_error
{
	using std::runtime_error::runtime_error;
};

struct InvalidTruncation : Error
{
	using Error::Error;
};

struct DimensionMismatch : Error
{
	using Error::Error;
};

struct UnsupportedCombination : Error
{
	using Error::Error;
};

/// Raised when a config field fails validation. `field` is the dotted path, e.g. "dqds[0].t".
struct ConfigError : Error
{
	ConfigError(std::string field_path, std::string const & what)
		: Error(field_path + ": " + what), field(std::move(field_path))
	{
	}
	std::string field;
};

struct NonUniqueSteadyState : Error
{
	NonUniqueSteadyState(int kernel, std::string const & what) : Error(what), kernel_dimension(kernel) {}
	int kernel_dimension;
};

struct DegenerateInput : Error
{
	using Error::Error;
};

struct FitInitError : Error
{
	using Error::Error;
};

}  // namespace cqed
