#pragma once

namespace ckrlie {

/// A point (p1, p2) of the CKR phase plane; p = p1 + i p2.
struct PhasePoint {
  double p1 = 0.0;
  double p2 = 0.0;
};

/// Components (u1, u2) of a tangent vector at a PhasePoint.
struct TangentPair {
  double u1 = 0.0;
  double u2 = 0.0;
};

}  // namespace ckrlie
