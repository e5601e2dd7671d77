#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "cqed/eigen_analysis.hpp"
#include "cqed/fitting.hpp"
#include "cqed/steady_state.hpp"

namespace cqed
{

using Json = nlohmann::ordered_json;

// SystemConfig <-> JSON. Field names follow the domain types; frequencies in MHz.
Json to_json(SystemConfig const & config);
/// Throws ConfigError with the dotted field path on missing or ill-typed fields.
SystemConfig config_from_json(Json const & j);
SystemConfig load_config(std::filesystem::path const & path);

Json to_json(FitResult const & result);
Json to_json(EigenTriple const & triple);
Json to_json(DarkStateReport const & report);

/// Writes `text` to `path` through a temporary file and rename.
void write_atomic(std::filesystem::path const & path, std::string const & text);

/// %.12g formatting used by every CSV/JSON number we emit.
std::string format_number(double v);

// CSV -------------------------------------------------------------------------------------

inline constexpr char const * trace_csv_header = "nu_p_MHz,re_s11,im_s11,abs_s11,phase_rad,n_flux";

std::string trace_to_csv(SpectrumTrace const & trace);
void write_trace_csv(std::filesystem::path const & path, SpectrumTrace const & trace);

/// Parsed columns of a trace CSV (either the full trace schema or "x,y,sigma").
struct TraceTable
{
	std::vector<double> nu_p;
	std::vector<Complex> s11;
	std::vector<double> n_flux;
	bool full_schema = false;
	MeasuredTrace measured;  ///< y = abs_s11 for the full schema
};

/// Throws ConfigError("<file>:<line>", ...) on schema mismatch.
TraceTable read_trace_csv(std::filesystem::path const & path, TraceKind kind = TraceKind::reflection_magnitude);
TraceTable parse_trace_csv(std::string const & text, std::string const & source,
	TraceKind kind = TraceKind::reflection_magnitude);

/// "start:stop:count"
std::vector<double> parse_grid(std::string const & spec);
/// "path=start:stop:count"
SweepSpec parse_sweep(std::string const & spec);

}  // namespace cqed
