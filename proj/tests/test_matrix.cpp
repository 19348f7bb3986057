#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "oracles.hpp"
#include "timeo1/matrix.hpp"

using namespace timeo1;

TEST_CASE("fit_stats on symmetric two-point columns", "[matrix]") {
    Matrix m{{1, 3}, {3, 5}};
    ColumnStats s = fit_stats(m);
    CHECK(s.means[0] == 2.0);
    CHECK(s.means[1] == 4.0);
    CHECK(s.stds[0] == 1.0);
    CHECK(s.stds[1] == 1.0);
}

TEST_CASE("fit_stats floors a constant column at epsilon", "[matrix]") {
    Matrix m{{5}, {5}, {5}};
    ColumnStats s = fit_stats(m);
    CHECK(s.means[0] == 5.0);
    CHECK(s.stds[0] == kStdFloor);
}

TEST_CASE("fit_stats population std by hand oracle", "[matrix]") {
    Matrix m{{0}, {1}, {2}, {3}};
    ColumnStats s = fit_stats(m);
    CHECK(s.means[0] == Catch::Approx(1.5).margin(1e-15));
    CHECK(s.stds[0] == Catch::Approx(std::sqrt(1.25)).margin(1e-15));
}

TEST_CASE("fit_stats rejects single-row input", "[matrix]") {
    Matrix m{{1, 2}};
    CHECK_THROWS_AS(fit_stats(m), DimensionError);
}

TEST_CASE("standardize against its own source has zero means and unit stds", "[matrix]") {
    Matrix m = oracles::random_matrix(50, 4, 7, 3.0);
    ColumnStats s = fit_stats(m);
    Matrix z = standardize(m, s);
    ColumnStats after = fit_stats(z);
    for (std::size_t c = 0; c < 4; ++c) {
        CHECK(std::abs(after.means[c]) < 1e-12);
        CHECK(std::abs(after.stds[c] - 1.0) < 1e-9);
    }
}

TEST_CASE("standardize basic cases", "[matrix]") {
    Matrix z(3, 2);
    ColumnStats id{{0.0, 0.0}, {1.0, 1.0}};
    Matrix out = standardize(z, id);
    CHECK(out.max_abs() == 0.0);

    Matrix one{{3.0}};
    ColumnStats s{{1.0}, {2.0}};
    CHECK(standardize(one, s)(0, 0) == 1.0);

    ColumnStats wrong{{0.0}, {1.0}};
    CHECK_THROWS_AS(standardize(z, wrong), DimensionError);
}

TEST_CASE("destandardize round-trips standardize", "[matrix]") {
    Matrix m = oracles::random_matrix(20, 3, 11, 2.0);
    ColumnStats s = fit_stats(m);
    Matrix back = destandardize(standardize(m, s), s);
    for (std::size_t i = 0; i < m.size(); ++i)
        CHECK(back.data()[i] == Catch::Approx(m.data()[i]).margin(1e-12));
}

TEST_CASE("svd of the identity", "[matrix]") {
    SvdResult r = svd(Matrix::identity(2));
    CHECK(r.singular_values[0] == Catch::Approx(1.0).margin(1e-14));
    CHECK(r.singular_values[1] == Catch::Approx(1.0).margin(1e-14));
    // right vectors span the standard basis
    for (std::size_t j = 0; j < 2; ++j) {
        double m = std::max(std::abs(r.right_vectors(0, j)), std::abs(r.right_vectors(1, j)));
        CHECK(m == Catch::Approx(1.0).margin(1e-12));
    }
}

TEST_CASE("svd of a rank-1 matrix by characteristic polynomial oracle", "[matrix]") {
    // Gram = [[25, 0], [0, 0]] so sigma = [5, 0] and v1 = e1
    Matrix m{{3, 0}, {4, 0}};
    SvdResult r = svd(m, true);
    CHECK(r.singular_values[0] == Catch::Approx(5.0).margin(1e-12));
    CHECK(r.singular_values[1] == Catch::Approx(0.0).margin(1e-12));
    CHECK(std::abs(r.right_vectors(0, 0)) == Catch::Approx(1.0).margin(1e-12));
    CHECK(std::abs(r.right_vectors(1, 0)) == Catch::Approx(0.0).margin(1e-12));
    CHECK(r.right_vectors(0, 0) > 0.0);  // sign convention
}

TEST_CASE("svd reconstruction and right-vector orthonormality", "[matrix]") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        Matrix m = oracles::random_matrix(5, 3, seed);
        SvdResult r = svd(m, true);

        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) {
                double dot = 0.0;
                for (std::size_t k = 0; k < 3; ++k)
                    dot += r.right_vectors(k, i) * r.right_vectors(k, j);
                CHECK(std::abs(dot - (i == j ? 1.0 : 0.0)) < 1e-10);
            }

        Matrix rec(5, 3);
        for (std::size_t i = 0; i < 5; ++i)
            for (std::size_t j = 0; j < 3; ++j) {
                double s = 0.0;
                for (std::size_t k = 0; k < 3; ++k)
                    s += r.left_vectors(i, k) * r.singular_values[k] * r.right_vectors(j, k);
                rec(i, j) = s;
            }
        double num = 0.0;
        for (std::size_t i = 0; i < rec.size(); ++i) {
            const double d = rec.data()[i] - m.data()[i];
            num += d * d;
        }
        CHECK(std::sqrt(num) / m.frobenius_norm() < 1e-10);
    }
}

TEST_CASE("svd singular values match the shifted power iteration oracle", "[matrix]") {
    for (auto [rows, cols, seed] :
         {std::tuple<std::size_t, std::size_t, std::uint64_t>{5, 3, 21},
          {8, 8, 22},
          {5, 3, 23},
          {8, 8, 24}}) {
        Matrix m = oracles::random_matrix(rows, cols, seed);
        SvdResult r = svd(m);
        std::vector<double> ref = oracles::gram_singular_values(m, seed * 31 + 1);
        for (std::size_t i = 0; i < cols; ++i) {
            if (ref[i] < 1e-8) continue;
            CHECK(oracles::rel_err(r.singular_values[i], ref[i]) < 1e-10);
        }
    }
}

TEST_CASE("svd reconstruction on larger random matrices", "[matrix]") {
    Matrix m = oracles::random_matrix(200, 60, 77);
    SvdResult r = svd(m, true);
    Matrix lambda(60, 60);
    for (std::size_t i = 0; i < 60; ++i) lambda(i, i) = r.singular_values[i];
    Matrix rec = matmul(matmul(r.left_vectors, lambda), transpose(r.right_vectors));
    double num = 0.0;
    for (std::size_t i = 0; i < rec.size(); ++i) {
        const double d = rec.data()[i] - m.data()[i];
        num += d * d;
    }
    CHECK(std::sqrt(num) / m.frobenius_norm() < 1e-9);
    for (std::size_t i = 1; i < 60; ++i)
        CHECK(r.singular_values[i - 1] >= r.singular_values[i]);
}

TEST_CASE("svd rejects non-finite input", "[matrix]") {
    Matrix m(2, 2);
    m.data()[1] = std::nan("");
    CHECK_THROWS_AS(svd(m), NumericError);
}

TEST_CASE("cholesky_solve identity and diagonal cases", "[matrix]") {
    Matrix b{{4}, {6}};
    Matrix x = cholesky_solve(Matrix::identity(2), b);
    CHECK(x(0, 0) == 4.0);
    CHECK(x(1, 0) == 6.0);

    Matrix d{{2, 0}, {0, 2}};
    Matrix x2 = cholesky_solve(d, b);
    CHECK(x2(0, 0) == Catch::Approx(2.0).margin(1e-14));
    CHECK(x2(1, 0) == Catch::Approx(3.0).margin(1e-14));
}

TEST_CASE("cholesky_solve residual on random SPD systems", "[matrix]") {
    Matrix a = oracles::random_matrix(4, 4, 5);
    Matrix spd = gram(a);
    for (std::size_t i = 0; i < 4; ++i) spd(i, i) += 1.0;
    Matrix b = oracles::random_matrix(4, 2, 6);
    Matrix x = cholesky_solve(spd, b);
    Matrix ax = matmul(spd, x);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i) {
        const double d = ax.data()[i] - b.data()[i];
        num += d * d;
        den += b.data()[i] * b.data()[i];
    }
    CHECK(std::sqrt(num / den) < 1e-10);
}

TEST_CASE("cholesky_solve rejects indefinite matrices", "[matrix]") {
    Matrix neg{{1, 0}, {0, -1}};
    Matrix b{{1}, {1}};
    CHECK_THROWS_AS(cholesky_solve(neg, b), FactorizationError);
}

TEST_CASE("log_det_spd basic values", "[matrix]") {
    CHECK(log_det_spd(Matrix::identity(3)) == 0.0);
    Matrix d{{2, 0}, {0, 3}};
    CHECK(log_det_spd(d) == Catch::Approx(std::log(6.0)).margin(1e-14));
    Matrix c{{1, 0.5}, {0.5, 1}};
    CHECK(log_det_spd(c) == Catch::Approx(std::log(0.75)).margin(1e-14));
}

TEST_CASE("matrix constructors enforce invariants", "[matrix]") {
    CHECK_THROWS_AS(Matrix(2, 2, {1.0, 2.0, 3.0}), DimensionError);
    CHECK_THROWS_AS(Matrix(1, 2, {1.0, std::numeric_limits<double>::infinity()}), NumericError);
    Matrix ok(2, 3);
    CHECK(ok.size() == 6);
    CHECK(ok.all_finite());
}

TEST_CASE("jacobi eigendecomposition of a known 2x2", "[matrix]") {
    // eigenvalues of [[2,1],[1,2]] are 3 and 1
    Matrix m{{2, 1}, {1, 2}};
    EighResult e = jacobi_eigh(m);
    CHECK(e.eigenvalues[0] == Catch::Approx(3.0).margin(1e-12));
    CHECK(e.eigenvalues[1] == Catch::Approx(1.0).margin(1e-12));
}
