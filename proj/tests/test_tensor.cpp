#include <doctest.h>

#include <cmath>
#include <limits>

#include "spconv/tensor.hpp"

using namespace spconv;

TEST_CASE("vec flattens row-major") {
    TensorD t({2, 2}, {1, 2, 3, 4});
    CHECK(vec(t) == std::vector<double>{1, 2, 3, 4});

    TensorD one({1}, {7});
    CHECK(vec(one) == std::vector<double>{7});

    TensorD t3({2, 1, 2}, {0, 1, 2, 3});
    CHECK(vec(t3) == std::vector<double>{0, 1, 2, 3});
}

TEST_CASE("tensor construction validates shape and values") {
    CHECK_THROWS_AS(TensorD({2, 2}, {1, 2, 3}), DimensionError);
    CHECK_THROWS_AS(TensorD({2, 0}), DimensionError);
    CHECK_THROWS_AS(TensorD({1}, {std::numeric_limits<double>::quiet_NaN()}), DimensionError);
    CHECK_THROWS_AS(TensorD({1}, {std::numeric_limits<double>::infinity()}), DimensionError);

    TensorD z({3, 2});
    CHECK(z.size() == 6);
    for (double v : z.data()) CHECK(v == 0.0);
}

TEST_CASE("multi-index access matches row-major offsets") {
    TensorD t({2, 3}, {10, 11, 12, 20, 21, 22});
    CHECK(t(0, 0) == 10);
    CHECK(t(0, 2) == 12);
    CHECK(t(1, 1) == 21);
    CHECK(t.offset(1, 2) == 5);
}

TEST_CASE("reshape keeps data, changes shape") {
    TensorD t({4}, {1, 2, 3, 4});
    TensorD r = reshape(t, {2, 2});
    CHECK(r.shape() == std::vector<std::size_t>{2, 2});
    CHECK(vec(r) == vec(t));

    TensorD t23({2, 3}, {1, 2, 3, 4, 5, 6});
    CHECK(vec(reshape(t23, {3, 2})) == vec(t23));
    CHECK(vec(reshape(TensorD({1, 6}, {1, 2, 3, 4, 5, 6}), {6})) ==
          std::vector<double>{1, 2, 3, 4, 5, 6});

    CHECK_THROWS_AS(reshape(t, {3}), DimensionError);
}

TEST_CASE("vec is invariant under reshape") {
    TensorD t({2, 3, 2}, {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11});
    CHECK(vec(reshape(t, {12})) == vec(t));
    CHECK(vec(reshape(t, {4, 3})) == vec(t));
    CHECK(vec(reshape(t, {2, 6})) == vec(t));
}

TEST_CASE("ConvKernel validates its invariants") {
    TensorD w({3, 3, 1, 1});
    CHECK_THROWS_AS(ConvKernel(w, 1, 2), DimensionError);   // k > n
    CHECK_THROWS_AS(ConvKernel(w, 2, 3), DimensionError);   // n mod s != 0
    CHECK_THROWS_AS(ConvKernel(w, 0, 4), DimensionError);   // bad stride
    CHECK_THROWS_AS(ConvKernel(TensorD({2, 3, 1, 1}), 1, 4), DimensionError);  // non-square
    CHECK_THROWS_AS(ConvKernel(TensorD({2, 2, 1}), 1, 4), DimensionError);     // not 4-D

    ConvKernel kern(w, 2, 6);
    CHECK(kern.k() == 3);
    CHECK(kern.out_size() == 3);
}

TEST_CASE("pad_kernel appends zeros on the high side") {
    ConvKernel k1(TensorD({1, 1, 1, 1}, {5.0}), 1, 2);
    TensorD p = pad_kernel(k1);
    CHECK(p.shape() == std::vector<std::size_t>{2, 2, 1, 1});
    CHECK(p(0, 0, 0, 0) == 5.0);
    CHECK(p(0, 1, 0, 0) == 0.0);
    CHECK(p(1, 0, 0, 0) == 0.0);
    CHECK(p(1, 1, 0, 0) == 0.0);
}

TEST_CASE("pad_kernel with k=n is the identity") {
    TensorD w({3, 3, 2, 1});
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = static_cast<double>(i) + 0.5;
    ConvKernel kern(w, 1, 3);
    TensorD p = pad_kernel(kern);
    CHECK(vec(p) == vec(w));
}

TEST_CASE("pad_kernel zeroes the appended rows and columns") {
    TensorD w({3, 3, 2, 2});
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::sin(static_cast<double>(i) + 1.0);
    ConvKernel kern(w, 1, 4);
    TensorD p = pad_kernel(kern);
    for (int p2 = 0; p2 < 4; ++p2)
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                CHECK(p(3, p2, i, j) == 0.0);
                CHECK(p(p2, 3, i, j) == 0.0);
            }
    // restriction to the leading k x k window recovers the weights exactly
    for (int p1 = 0; p1 < 3; ++p1)
        for (int p2 = 0; p2 < 3; ++p2)
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) CHECK(p(p1, p2, i, j) == w(p1, p2, i, j));
}
