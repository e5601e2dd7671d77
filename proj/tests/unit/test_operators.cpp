#include <doctest.h>

#include "cqed/operators.hpp"

using namespace cqed;

TEST_CASE("fock_destroy small cutoffs")
{
	OperatorMatrix const a2 = fock_destroy(2);
	OperatorMatrix expected = OperatorMatrix::Zero(2, 2);
	expected(0, 1) = 1.0;
	CHECK(max_abs(a2 - expected) == 0.0);

	OperatorMatrix const n = fock_number(4);
	for (int k = 0; k < 4; ++k)
		CHECK(std::abs(n(k, k) - Complex(k)) < 1e-15);
	CHECK(max_abs(n - OperatorMatrix(n.diagonal().asDiagonal())) == 0.0);
}

TEST_CASE("truncated commutator keeps its corner artifact")
{
	OperatorMatrix const a = fock_destroy(6);
	OperatorMatrix const c = commutator(a, OperatorMatrix(a.adjoint()));
	OperatorMatrix expected = OperatorMatrix::Identity(6, 6);
	expected(5, 5) = -5.0;
	CHECK(max_abs(c - expected) < 1e-14);
}

TEST_CASE("a|n> = sqrt(n)|n-1>")
{
	int const cutoff = 7;
	OperatorMatrix const a = fock_destroy(cutoff);
	for (int n = 1; n < cutoff; ++n)
	{
		StateVector ket = StateVector::Zero(cutoff);
		ket(n) = 1.0;
		StateVector expected = StateVector::Zero(cutoff);
		expected(n - 1) = std::sqrt(double(n));
		CHECK((a * ket - expected).norm() == 0.0);
	}
	CHECK_THROWS_AS(fock_destroy(1), InvalidTruncation);
}

TEST_CASE("pauli matrices")
{
	OperatorMatrix x(2, 2), z(2, 2);
	x << 0, 1, 1, 0;
	z << 1, 0, 0, -1;
	CHECK(max_abs(pauli(PauliAxis::x) - x) == 0.0);
	CHECK(max_abs(pauli(PauliAxis::z) - z) == 0.0);
	// sigma_y = -i (sigma_+ - sigma_-) with sigma_- = |g><e|
	OperatorMatrix const y = Complex(0, -1) * (sigma_minus() - sigma_plus());
	CHECK(max_abs(pauli(PauliAxis::y) - y) == 0.0);
	CHECK(max_abs(commutator(pauli(PauliAxis::x), pauli(PauliAxis::y)) - Complex(0, 2) * pauli(PauliAxis::z)) == 0.0);
}

TEST_CASE("embed")
{
	HilbertLayout const layout{3, 2};
	CHECK(layout.dimension() == 12);

	for (int slot = 0; slot < layout.num_slots(); ++slot)
	{
		int const d = layout.slot_dimension(slot);
		OperatorMatrix const id = embed(OperatorMatrix::Identity(d, d), slot, layout);
		CHECK(id.rows() == 12);
		CHECK(max_abs(id - OperatorMatrix::Identity(12, 12)) == 0.0);
	}

	OperatorMatrix const sx1 = embed(pauli(PauliAxis::x), 1, layout);
	OperatorMatrix const sz2 = embed(pauli(PauliAxis::z), 2, layout);
	CHECK(max_abs(commutator(sx1, sz2)) == 0.0);

	SUBCASE("distinct slots commute")
	{
		OperatorMatrix const a = embed(fock_destroy(3), 0, layout);
		OperatorMatrix const sm = embed(sigma_minus(), 1, layout);
		OperatorMatrix const sy = embed(pauli(PauliAxis::y), 2, layout);
		CHECK(max_abs(commutator(a, sm)) < 1e-12);
		CHECK(max_abs(commutator(a, sy)) < 1e-12);
		CHECK(max_abs(commutator(sm, sy)) < 1e-12);
		CHECK(max_abs(commutator(OperatorMatrix(a.adjoint()), sm)) < 1e-12);
	}

	SUBCASE("adjoint commutes with embedding")
	{
		OperatorMatrix m(2, 2);
		m << Complex(1, 2), Complex(3, -1), Complex(0.5, 0.25), Complex(-2, 0);
		OperatorMatrix const lhs = embed(m, 2, layout).adjoint();
		OperatorMatrix const rhs = embed(OperatorMatrix(m.adjoint()), 2, layout);
		CHECK(max_abs(lhs - rhs) == 0.0);
	}

	SUBCASE("errors")
	{
		CHECK_THROWS_AS(embed(pauli(PauliAxis::x), 3, layout), DimensionMismatch);
		CHECK_THROWS_AS(embed(pauli(PauliAxis::x), 0, layout), DimensionMismatch);
		CHECK_THROWS_AS(embed(fock_destroy(3), 1, layout), DimensionMismatch);
	}
}

TEST_CASE("operators in single precision")
{
	Operator<float> const a = fock_destroy<float>(4);
	CHECK(a(2, 3) == std::complex<float>(std::sqrt(3.0f)));
	Operator<float> const e = embed(pauli<float>(PauliAxis::z), 1, HilbertLayout{2, 1});
	CHECK(e.rows() == 4);
	CHECK(e(1, 1) == std::complex<float>(-1.0f));
}
