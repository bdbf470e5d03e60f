#pragma once

#include <span>
#include <vector>

#include "phasereg/matrix.hpp"

namespace phasereg {

enum class Direction { Forward, Inverse };

// All transforms are unitary: both directions scale by 1/sqrt(N).
// Forward kernel is exp(-2*pi*i*k*j/N).
void fft_inplace(std::span<Complex> data, Direction dir);
void fft_rows_inplace(ComplexArray2D& data, Direction dir);
void fft2_inplace(ComplexArray2D& data, Direction dir);

std::vector<Complex> fft(std::span<const double> signal);
std::vector<double> ifft_real(std::vector<Complex> spectrum);

// Half spectrum (n/2+1 bins) of a real signal, same unitary scaling.
std::vector<Complex> rfft(std::span<const double> signal);
std::vector<double> irfft(std::span<const Complex> half, std::size_t n);

ComplexArray2D to_complex(const Array2D& a);
Array2D real_part(const ComplexArray2D& a);
ComplexArray2D fft2(const Array2D& a);
Array2D ifft2_real(ComplexArray2D spectrum);

} // namespace phasereg
