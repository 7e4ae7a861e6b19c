#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <string_view>

#include <Eigen/Dense>

namespace tcsim {

using cplx = std::complex<double>;

inline constexpr std::size_t kMomentCount = 16;

/// Slot of each expectation value inside a MomentVector. "d" marks a dagger,
/// so `adb` is <a^dagger b>.
enum class Moment : std::size_t {
  a = 0, ad, b, bd,
  aa, adad, bb, bdbd,
  ab, adbd, adb, abd,
  ada, aad, bdb, bbd,
};

using MomentColumn = Eigen::Matrix<cplx, 16, 1>;

/// The sixteen first and second moments
/// (<a>, <a+>, <b>, <b+>, <aa>, <a+a+>, <bb>, <b+b+>, <ab>, <a+b+>, <a+b>,
///  <ab+>, <a+a>, <aa+>, <b+b>, <bb+>).
struct MomentVector {
  std::array<cplx, kMomentCount> entries{};

  cplx& operator[](Moment m) { return entries[static_cast<std::size_t>(m)]; }
  const cplx& operator[](Moment m) const { return entries[static_cast<std::size_t>(m)]; }
  cplx& operator[](std::size_t i) { return entries[i]; }
  const cplx& operator[](std::size_t i) const { return entries[i]; }

  MomentColumn column() const;
  static MomentVector from_column(const MomentColumn& c);

  bool all_finite() const;
  double max_abs() const;

  bool operator==(const MomentVector&) const = default;
};

/// Short column label used in CSV headers ("a", "ad", ..., "bbd").
std::string_view moment_name(std::size_t index);

/// Hermitian conjugate partner of each slot (a <-> ad, ab <-> adbd,
/// adb <-> abd; the number-like slots 12..15 are their own partners).
std::size_t conjugate_partner(std::size_t index);

/// Largest violation of the conjugate pairings and of the reality of slots
/// 12..15. Each term is scaled by max(1, |entries involved|) so the measure
/// is relative for large moments.
double hermiticity_violation(const MomentVector& f);

/// max(|<aa+> - <a+a> - 1|, |<bb+> - <b+b> - 1|).
double commutator_violation(const MomentVector& f);

}  // namespace tcsim
