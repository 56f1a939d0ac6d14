#include <doctest.h>

#include <cmath>
#include <cstring>

#include "nykpca/kernel.hpp"
#include "nykpca/numerics.hpp"
#include "parallel.hpp"
#include "testutil.hpp"

using namespace nykpca;

namespace {
KernelSpec gaussian(double sigma) {
    return KernelSpec{KernelFamily::Gaussian, sigma, 2, 0.0};
}
const KernelSpec kLinear{KernelFamily::Linear, 1.0, 2, 0.0};
}  // namespace

TEST_CASE("eval_kernel closed forms") {
    Vec x(2), y(2);
    x << 3.1, -2.0;
    CHECK(eval_kernel(gaussian(0.5), x, x) == 1.0);

    x << 1.0, 2.0;
    y << 3.0, 4.0;
    CHECK(eval_kernel(kLinear, x, y) == 11.0);

    x << 0.0, 0.0;
    y << 1.0, 1.0;
    CHECK(eval_kernel(gaussian(0.5), x, y) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));

    KernelSpec poly{KernelFamily::Polynomial, 1.0, 2, 1.0};
    CHECK(eval_kernel(poly, x, y) == doctest::Approx((0.0 + 1.0) * (0.0 + 1.0)));
}

TEST_CASE("eval_kernel rejects bad input") {
    Vec x(2), y(3);
    x.setZero();
    y.setZero();
    CHECK_THROWS_AS(eval_kernel(kLinear, x, y), UsageError);
    Vec z(2);
    z << 1.0, std::nan("");
    Vec w = Vec::Zero(2);
    CHECK_THROWS_AS(eval_kernel(kLinear, z, w), UsageError);
    CHECK_THROWS_AS(eval_kernel(gaussian(-1.0), w, w), UsageError);
    CHECK_THROWS_AS(eval_kernel(KernelSpec{KernelFamily::Polynomial, 1.0, 0, 0.0}, w, w),
                    UsageError);
}

TEST_CASE("gram single point and tiny linear case") {
    RowMat a(1, 2);
    a << 0.3, -0.7;
    Mat g = gram_self(gaussian(2.0), a);
    CHECK(g.rows() == 1);
    CHECK(g(0, 0) == 1.0);

    RowMat b(2, 1);
    b << 0.0, 1.0;
    Mat gl = gram_self(kLinear, b);
    CHECK(gl(0, 0) == 0.0);
    CHECK(gl(0, 1) == 0.0);
    CHECK(gl(1, 0) == 0.0);
    CHECK(gl(1, 1) == 1.0);
}

TEST_CASE("gram matches the elementwise oracle loop exactly") {
    Dataset data = testutil::random_dataset(3, 4, 7);
    Mat g = gram_self(gaussian(1.0), data.x);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            const double direct = eval_kernel(gaussian(1.0), data.x.row(i).transpose(),
                                              data.x.row(j).transpose());
            CHECK(g(i, j) == direct);  // 0 ulp
        }
}

TEST_CASE("gram transpose symmetry is exact") {
    Dataset a = testutil::random_dataset(7, 5, 11);
    Dataset b = testutil::random_dataset(4, 5, 13);
    for (const auto& spec : {gaussian(0.7), kLinear, KernelSpec{KernelFamily::Polynomial, 1.0, 3, 0.5}}) {
        Mat ab = gram(spec, a.x, b.x);
        Mat ba = gram(spec, b.x, a.x);
        CHECK((ab - ba.transpose()).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("self gram is exactly symmetric, unit diagonal for Gaussian, numerically PSD") {
    Dataset data = testutil::random_dataset(40, 3, 17);
    Mat g = gram_self(gaussian(1.5), data.x);
    CHECK((g - g.transpose()).cwiseAbs().maxCoeff() == 0.0);
    for (int i = 0; i < 40; ++i) CHECK(g(i, i) == 1.0);

    EigenDecomposition ed = sym_eig(g);
    CHECK(ed.values.minCoeff() >= -1e-10 * g.trace());
}

TEST_CASE("gram rejects mismatched dimensions") {
    Dataset a = testutil::random_dataset(3, 4, 1);
    Dataset b = testutil::random_dataset(3, 5, 2);
    CHECK_THROWS_AS(gram(kLinear, a.x, b.x), UsageError);
}

TEST_CASE("parallel assembly is bitwise identical to serial") {
    Dataset a = testutil::random_dataset(128, 6, 23);
    Dataset b = testutil::random_dataset(96, 6, 29);

    detail::thread_count_override().store(1);
    Mat serial = gram(gaussian(0.8), a.x, b.x);
    Mat serial_self = gram_self(gaussian(0.8), a.x);
    detail::thread_count_override().store(4);
    Mat parallel = gram(gaussian(0.8), a.x, b.x);
    Mat parallel_self = gram_self(gaussian(0.8), a.x);
    detail::thread_count_override().store(0);

    CHECK(std::memcmp(serial.data(), parallel.data(),
                      sizeof(double) * static_cast<size_t>(serial.size())) == 0);
    CHECK(std::memcmp(serial_self.data(), parallel_self.data(),
                      sizeof(double) * static_cast<size_t>(serial_self.size())) == 0);
}

TEST_CASE("gram_block carries source tags and uses the symmetric path") {
    Dataset a = testutil::random_dataset(5, 2, 31);
    GramBlock block = gram_block(gaussian(1.0), a.x, "train", a.x, "train");
    CHECK(block.row_source == "train");
    CHECK((block.values - block.values.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("mean_kernel_diag equals the Gram trace over n") {
    Dataset data = testutil::random_dataset(12, 3, 37);
    for (const auto& spec :
         {gaussian(1.1), kLinear, KernelSpec{KernelFamily::Polynomial, 1.0, 2, 0.3}}) {
        Mat g = gram_self(spec, data.x);
        CHECK(mean_kernel_diag(spec, data.x) ==
              doctest::Approx(g.trace() / 12.0).epsilon(1e-14));
    }
}
