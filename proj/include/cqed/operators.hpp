#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include "cqed/errors.hpp"

namespace cqed
{

template <typename Scalar>
using Operator = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

using Complex = std::complex<double>;
using OperatorMatrix = Operator<double>;
using StateVector = Eigen::VectorXcd;

enum class PauliAxis
{
	x,
	y,
	z
};

/// Tensor-product space of one truncated bosonic mode followed by `num_qubits` two-level systems.
/// Slot 0 is always the resonator; slot k (k >= 1) is DQD_k.
struct HilbertLayout
{
	int fock_cutoff = 5;
	int num_qubits = 0;

	int num_slots() const { return 1 + num_qubits; }
	int slot_dimension(int slot) const { return slot == 0 ? fock_cutoff : 2; }
	int dimension() const { return fock_cutoff * (1 << num_qubits); }

	void validate() const
	{
		if (fock_cutoff < 2)
			throw InvalidTruncation("fock_cutoff must be >= 2, got " + std::to_string(fock_cutoff));
		if (num_qubits < 0)
			throw InvalidTruncation("num_qubits must be >= 0");
	}

	bool operator==(HilbertLayout const &) const = default;
};

/// Truncated annihilation operator, a|n> = sqrt(n)|n-1>.
template <typename Scalar = double>
Operator<Scalar> fock_destroy(int cutoff)
{
	if (cutoff < 2)
		throw InvalidTruncation("fock cutoff must be >= 2, got " + std::to_string(cutoff));
	Operator<Scalar> a = Operator<Scalar>::Zero(cutoff, cutoff);
	for (int n = 1; n < cutoff; ++n)
		a(n - 1, n) = std::sqrt(static_cast<Scalar>(n));
	return a;
}

template <typename Scalar = double>
Operator<Scalar> fock_number(int cutoff)
{
	Operator<Scalar> const a = fock_destroy<Scalar>(cutoff);
	return a.adjoint() * a;
}

/// Pauli matrices with sigma_z = diag(+1, -1). Index 0 is |g>, index 1 is |e>.
template <typename Scalar = double>
Operator<Scalar> pauli(PauliAxis axis)
{
	using C = std::complex<Scalar>;
	Operator<Scalar> s(2, 2);
	switch (axis)
	{
	case PauliAxis::x:
		s << C(0), C(1), C(1), C(0);
		break;
	case PauliAxis::y:
		s << C(0), C(0, -1), C(0, 1), C(0);
		break;
	case PauliAxis::z:
		s << C(1), C(0), C(0), C(-1);
		break;
	}
	return s;
}

/// Lowering operator |g><e|.
template <typename Scalar = double>
Operator<Scalar> sigma_minus()
{
	Operator<Scalar> s = Operator<Scalar>::Zero(2, 2);
	s(0, 1) = 1;
	return s;
}

template <typename Scalar = double>
Operator<Scalar> sigma_plus()
{
	return sigma_minus<Scalar>().adjoint();
}

/// I (x) ... (x) op (x) ... (x) I with `op` placed in `slot`.
template <typename Derived>
Operator<typename Derived::RealScalar> embed(
	Eigen::MatrixBase<Derived> const & op, int slot, HilbertLayout const & layout)
{
	using Scalar = typename Derived::RealScalar;
	if (slot < 0 || slot >= layout.num_slots())
		throw DimensionMismatch(
			"slot " + std::to_string(slot) + " out of range for " +
			std::to_string(layout.num_slots()) + " slots");
	int const local = layout.slot_dimension(slot);
	if (op.rows() != local || op.cols() != local)
		throw DimensionMismatch(
			"operator of size " + std::to_string(op.rows()) + "x" + std::to_string(op.cols()) +
			" does not fit slot " + std::to_string(slot) + " (dimension " + std::to_string(local) + ")");

	Operator<Scalar> result = Operator<Scalar>::Identity(1, 1);
	for (int s = 0; s < layout.num_slots(); ++s)
	{
		Operator<Scalar> factor = s == slot
			? Operator<Scalar>(op.template cast<std::complex<Scalar>>())
			: Operator<Scalar>::Identity(layout.slot_dimension(s), layout.slot_dimension(s));
		Operator<Scalar> next = Eigen::kroneckerProduct(result, factor);
		result = std::move(next);
	}
	return result;
}

template <typename A, typename B>
auto commutator(Eigen::MatrixBase<A> const & x, Eigen::MatrixBase<B> const & y)
{
	return (x * y - y * x).eval();
}

/// Largest entry magnitude, the norm used for all "equal to 1e-12" style checks.
template <typename Derived>
double max_abs(Eigen::MatrixBase<Derived> const & m)
{
	return m.size() == 0 ? 0.0 : static_cast<double>(m.cwiseAbs().maxCoeff());
}

template <typename Derived>
double hermiticity_error(Eigen::MatrixBase<Derived> const & m)
{
	return max_abs(m - m.adjoint());
}

}  // namespace cqed
