#pragma once

// Shared desk-scale instances for the test and acceptance suites.  Every null
// point here is found by exhaustive projective search against the modular
// equations (nothing is assumed valid), and torsion comes from the brute-force
// search, so downstream checks have an implementation-independent anchor.

#include <memory>
#include <vector>

#include <theta/theta.hpp>

namespace fx {

struct Instance {
    std::unique_ptr<theta::FieldContext> F;
    std::unique_ptr<theta::ThetaContext> ctx;
    std::unique_ptr<theta::ThetaNullPoint> null_B;
    std::vector<theta::AffineThetaPoint> torsion;  // all rational ell-torsion (brute forced)
};

// Canonical projective representatives at the given level that pass the
// symmetry + modular-equation check and are not chain-degenerate.
std::vector<theta::AffineThetaPoint> search_null_points(const theta::ThetaContext& ctx, size_t limit);

// g=1, n=4, ell=3, p=13: a null point whose 3-torsion is fully rational
// (9 points).
const Instance& p13();

// g=1, n=4, ell=1, p=17: chain arithmetic only (no 12th root of unity in F_17).
const Instance& p17();

// g=1, n=4, ell=5: full rational 5-torsion (25 points; p=401 is the
// smallest prime admitting it at d=1).
const Instance& ell5();

// g=1, n=2, ell=3: level-2 Kummer line with fully rational projective
// 3-torsion (5 classes including 0); found at p=67.
const Instance& kummer_line();

// g=2, n=2, ell=3: product-surface Kummer instance, enough rational 3-torsion
// for one reconstruction.
const Instance& g2();

// Reconstructed isogeny data above the p13 instance (kernel = first nonzero
// torsion point), shared by the isogeny/velu/pairing suites.
const theta::IsogenyData& p13_iso();

// The 2-isogenous level-2 Kummer line obtained from a level-4 instance by
// coordinate subsampling (even indices), with the projected torsion classes.
Instance project_to_level2(const Instance& base);

// Heisenberg translate (1,i,j).0 of a null point; lands on the variety.
theta::AffineThetaPoint translate(const theta::ThetaNullPoint& null_pt, const theta::IndexVector& i,
                                  const theta::IndexVector& j);

// Deterministic sample of on-variety points: Heisenberg translates of the null
// point by all (i, j) pairs in lexicographic order.
std::vector<theta::AffineThetaPoint> variety_sample(const theta::ThetaNullPoint& null_pt, size_t count);

}  // namespace fx
