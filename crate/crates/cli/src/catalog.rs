//! The fixed catalog printed by `list`.

use planar_jets::functions::{symbol_description, SYMBOL_IDS};

/// Experiment names with one-line descriptions, sorted by name.
pub const EXPERIMENTS: [(&str, &str); 8] = [
    ("commutator-scan", "diagonal profile and regularity verdict of (b(z)-b(w))/(z-w) on a set"),
    ("extend-linear", "complex-linear extension of real-linear maps from real subspaces of C^n"),
    ("holo-approx", "truncated Cauchy integral approximation of a C^1 function on a compact set"),
    ("locally-constant", "level-k locally constant approximation on an IFS set"),
    ("max-principle", "boundary versus interior maxima of polynomials on a region"),
    ("perimeter", "pairing identity f dbar(phi) against dbar(f phi) with a contour cross-check"),
    ("snowflake-jet", "Whitney modulus and Holder fit of the zero-differential jet on a Koch curve"),
    ("whitney-determinacy", "spread of admissible differentials fitted from neighbours"),
];

/// Set kinds accepted in the `set` block, sorted.
pub const SETS: [(&str, &str); 7] = [
    ("circle", "n equally spaced points on a circle {center, radius, n}"),
    ("file", "a sample JSON document {path}"),
    ("four-corner", "four maps of ratio 1/4 at the unit-square corners {depth}"),
    ("grid", "lattice points {corner, spacing, nx, ny}"),
    ("ifs", "user similarities {maps: [{ratio, angle, translation}], depth}"),
    ("koch", "Koch-type curve vertices {beta (default pi/3), depth}"),
    ("middle-thirds", "product of two middle-thirds Cantor sets {depth}"),
];

pub fn listing() -> String {
    let mut out = String::from("experiments:\n");
    for (name, what) in EXPERIMENTS {
        out.push_str(&format!("  {name:<22}{what}\n"));
    }
    out.push_str("sets:\n");
    for (name, what) in SETS {
        out.push_str(&format!("  {name:<22}{what}\n"));
    }
    out.push_str("functions:\n");
    for id in SYMBOL_IDS {
        let what = symbol_description(id).expect("every catalog id is described");
        out.push_str(&format!("  {id:<22}{what}\n"));
    }
    out
}
