#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/SparseCore>

#include "cqed/system_model.hpp"

namespace cqed
{

/// Superoperator acting on column-stacked vec(rho): vec(A rho B) = (B^T (x) A) vec(rho).
struct Liouvillian
{
	int hilbert_dim = 0;
	OperatorMatrix matrix;  ///< (d^2) x (d^2)
};

/// Hermitian, unit-trace density matrix.
using DensityMatrix = OperatorMatrix;

/// -i[H, .] + sum_c D[c], with D[c]rho = c rho c^dag - {c^dag c, rho} / 2.
Liouvillian build_liouvillian(OperatorMatrix const & H, std::span<OperatorMatrix const> collapse);

/// max |Tr(L(X))| over basis elements X; zero for a trace-preserving generator.
double trace_preservation_residual(Liouvillian const & liou);

/// Solves L vec(rho) = 0 with the first row replaced by the trace constraint.
/// Throws NonUniqueSteadyState if the kernel is more than one dimensional.
DensityMatrix steady_state(Liouvillian const & liou);

/// || L vec(rho) ||_2
double liouvillian_residual(Liouvillian const & liou, DensityMatrix const & rho);

/// Same superoperator in compressed sparse form; the per-point solver uses this.
using SparseSuperoperator = Eigen::SparseMatrix<Complex>;
SparseSuperoperator build_sparse_liouvillian(OperatorMatrix const & H, std::span<OperatorMatrix const> collapse);

/// Sparse LU solve. Falls back to the dense solver (and its uniqueness check) whenever the
/// sparse result is not a bounded, consistent solution.
DensityMatrix steady_state(SparseSuperoperator const & liou, int hilbert_dim);
double liouvillian_residual(SparseSuperoperator const & liou, DensityMatrix const & rho);

struct DensityDiagnostics
{
	double hermiticity;
	double trace_error;
	double min_eigenvalue;
};

DensityDiagnostics diagnose(DensityMatrix const & rho);

struct Scattering
{
	Complex beta;  ///< Tr(L rho)
	double flux;   ///< Tr(L^dag L rho)
};

Scattering scattering(DensityMatrix const & rho, OperatorMatrix const & L);

struct SteadyPoint
{
	Complex s11;  ///< conj(beta / alpha), analyser phase convention
	double flux;
	double photons;  ///< <a^dag a>
	DensityMatrix rho;
	double residual;
};

/// Steady state at the config's own probe frequency, with observables.
SteadyPoint solve_point(SystemConfig const & config);

/// S11 at probe frequency `nu_p`: |beta / alpha|, phase in the exp(+i w t) convention.
Complex reflection_coefficient(SystemConfig const & config, double nu_p);

struct SpectrumTrace
{
	std::vector<double> probe_freqs;
	std::vector<Complex> s11;
	std::vector<double> n_flux;
	SystemConfig config;
	std::string swept_path;  ///< empty unless produced by a sweep
	double swept_value = 0.0;
};

/// Inclusive uniform grid of `count` points; count == 1 yields {start}.
std::vector<double> linspace(double start, double stop, int count);

SpectrumTrace spectrum_trace(SystemConfig const & config, std::span<double const> grid, int workers = 1);

struct SweepSpec
{
	std::string path;
	std::vector<double> values;
};

std::vector<SpectrumTrace> sweep_2d(
	SystemConfig const & config, SweepSpec const & sweep, std::span<double const> grid, int workers = 1);

struct PhaseTrace
{
	std::vector<double> probe_freqs;
	std::vector<double> values;  ///< scale * dphi + offset, radians
	bool dispersive_ok = true;   ///< |Delta_r| > 3 max g for every DQD
	std::string reference = "pointwise arg S11 of the same config with all DQDs removed";
};

/// Single-tone stand-in for two-tone qubit spectroscopy: the phase of S11 swept across the
/// qubit-like resonances, referenced to the empty resonator and mapped through scale/offset.
PhaseTrace qubit_spectroscopy_trace(
	SystemConfig const & config, std::span<double const> grid, double scale, double offset, int workers = 1);

}  // namespace cqed
