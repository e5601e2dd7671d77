#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cqed/optimize.hpp"
#include "cqed/steady_state.hpp"

namespace cqed
{

enum class TraceKind
{
	reflection_magnitude,  ///< y = |S11|
	phase_shift            ///< y = dphi in radians
};

std::string to_string(TraceKind kind);
TraceKind parse_trace_kind(std::string const & name);

struct MeasuredTrace
{
	std::vector<double> x;  ///< probe MHz, or a control value for line cuts
	std::vector<double> y;
	double sigma = 0.0;     ///< <= 0: estimate from the trace tails
	TraceKind kind = TraceKind::reflection_magnitude;

	/// Throws ConfigError if values are non-finite or x is not strictly monotone.
	void validate() const;
};

MeasuredTrace to_measured(SpectrumTrace const & trace, double sigma = 0.0);

/// Noise estimate from the first and last 10% of points: std of first differences / sqrt(2).
double estimate_sigma(MeasuredTrace const & trace);

// Lorentzian peak extraction ------------------------------------------------------------

enum class Polarity
{
	automatic,
	dips,
	peaks
};

struct LorentzianPeak
{
	double center, width, amplitude;  ///< amplitude < 0 for dips; width is the FWHM
	double center_err, width_err, amplitude_err;
};

struct LorentzianFit
{
	double baseline = 0.0;
	double baseline_err = 0.0;
	std::vector<LorentzianPeak> peaks;  ///< ascending centers
	double residual_norm = 0.0;
	bool converged = false;
};

/// y = baseline + sum_j A_j (w_j/2)^2 / ((x - c_j)^2 + (w_j/2)^2).
double lorentzian_model(double x, double baseline, std::span<LorentzianPeak const> peaks);

/// Initialization uses the n most prominent local extrema (ties toward lower x) unless
/// `initial_centers` is given. Throws FitInitError when too few extrema exist.
LorentzianFit lorentzian_peaks(MeasuredTrace const & trace, int n_peaks, Polarity polarity = Polarity::automatic,
	std::span<double const> initial_centers = {});

// Parameter estimation ------------------------------------------------------------------

struct FreeParameter
{
	std::string path;  ///< SystemConfig path, or a nuisance name
	double initial = 0.0;
	double lower = -1e300;
	double upper = 1e300;
	double step = 0.0;  ///< 0: derived from the bounds and initial value
};

struct ParameterEstimate
{
	std::string name;
	double value = 0.0;
	double uncertainty = 0.0;
	bool fixed = false;
	std::string stage;
};

struct FitResult
{
	std::vector<ParameterEstimate> parameters;
	SystemConfig fitted;
	double residual_norm = 0.0;
	double initial_residual_norm = 0.0;
	double reduced_chi2 = 0.0;
	int iterations = 0;
	int evaluations = 0;
	int failed_evaluations = 0;
	bool converged = false;
	std::string stage;
	std::string diagnostics;

	ParameterEstimate const & at(std::string const & name) const;
	double value(std::string const & name) const { return at(name).value; }
	double uncertainty(std::string const & name) const { return at(name).uncertainty; }
};

struct ResonancePosition
{
	double control;    ///< raw control value (e.g. gate units or MHz of detuning)
	double frequency;  ///< observed resonance, MHz
};

/// Special free-parameter name for the multiplicative detuning-axis calibration.
inline constexpr char const * control_scale_name = "control_scale";

struct HamiltonianFitSpec
{
	SystemConfig model;
	std::string control_path;        ///< e.g. "dqds[1].delta"
	double control_scale = 1.0;      ///< used when control_scale is not free
	std::vector<FreeParameter> free;
	MinimizeOptions options;
	std::string stage = "hamiltonian";
};

/// Least squares between observed positions and the nearest one-excitation transition
/// frequency as the control varies.
FitResult hamiltonian_fit(std::span<ResonancePosition const> positions, HamiltonianFitSpec const & spec);

struct FitTrace
{
	MeasuredTrace trace;
	std::vector<std::pair<std::string, double>> overrides;  ///< applied on top of the model for this trace
};

struct FitProblem
{
	SystemConfig model;
	std::vector<FreeParameter> free;
	std::vector<FitTrace> traces;
	std::string stage = "stage1";
	MinimizeOptions options;
	int workers = 1;
	std::vector<ParameterEstimate> held;  ///< estimates from earlier stages, echoed as fixed
};

/// Weighted least squares of simulated against measured traces. Phase-shift traces get
/// "scale[i]" / "offset[i]" nuisance parameters appended.
FitResult master_equation_fit(FitProblem const & problem);

/// Chains stages: each stage starts from the previous fitted model with every earlier
/// estimate held fixed. Returns one result per stage.
std::vector<FitResult> staged_fit(SystemConfig const & model, std::vector<FitProblem> stages);

// Synthetic data ---------------------------------------------------------------------

/// Simulates each sweep value (or just `config` when the sweep is empty) and adds N(0, sigma)
/// noise to Re and Im of S11. Deterministic for a given seed.
std::vector<SpectrumTrace> synthesize_dataset(SystemConfig const & config, SweepSpec const & sweep,
	std::span<double const> grid, double sigma, std::uint64_t seed, int workers = 1);

/// Phase-shift counterpart: noise is added to dphi.
MeasuredTrace synthesize_phase_trace(SystemConfig const & config, std::span<double const> grid, double scale,
	double offset, double sigma, std::uint64_t seed, int workers = 1);

struct ScalingFit
{
	double amplitude;          ///< A in 2J = A / Delta_r, MHz^2
	double relative_residual;  ///< ||y - A/x|| / ||y||
};

ScalingFit exchange_scaling_fit(std::span<std::pair<double, double> const> points);

}  // namespace cqed
