#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace riesz {

/// Smallest 2^a 3^b 5^c 7^d >= n.
std::size_t fft_good_size(std::size_t n);

/// Real n-dimensional array, axis 0 fastest.
struct RealArray {
  std::vector<int> shape;
  std::vector<double> values;
};

/// Full linear convolution; output extent is na + nb - 1 per axis.
RealArray convolve_full(const RealArray& a, const RealArray& b);

/// out[i] = sum_j a[j] k[i - j + c] with k of odd extent 2c + 1 per axis;
/// output has the shape of `a`.
RealArray convolve_centered(const RealArray& a, const RealArray& k);

/// Upper bound on the working memory of one convolution, in bytes.
void set_fft_memory_limit(std::size_t bytes);
std::size_t fft_memory_limit();

}  // namespace riesz
