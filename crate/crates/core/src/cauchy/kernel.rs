use crate::C64;

/// Cells at least this many side lengths away use the multipole series.
pub const FAR_FIELD_RATIO: f64 = 4.0;

/// `∬ ηᵏ dA(η)` over the unit square centred at 0, for `k = 4, 8, 12, 16`.
/// Odd and `k ≢ 0 (mod 4)` moments vanish by symmetry.
const MOMENTS: [f64; 4] = [-1.0 / 60.0, 1.0 / 720.0, -1.0 / 5824.0, 1.0 / 39168.0];

/// `Φ − iΨ` with `Φ = x·atan(y/x) + (y/2)·ln(x²+y²)` and
/// `Ψ = y·atan(x/y) + (x/2)·ln(x²+y²)`, continuous with value 0 at the origin.
fn primitive(x: f64, y: f64) -> C64 {
    let r2 = x * x + y * y;
    if r2 == 0.0 {
        return C64::new(0.0, 0.0);
    }
    let l = 0.5 * r2.ln();
    let phi = if x == 0.0 { 0.0 } else { x * (y / x).atan() } + y * l;
    let psi = if y == 0.0 { 0.0 } else { y * (x / y).atan() } + x * l;
    C64::new(phi, -psi)
}

/// Exact `∬_Q dA(w) / (w − z)` over the square cell `Q` of side `h` centred
/// at `z + a`.
///
/// Near cells use the corner formula `P(x₁,y₁) − P(x₀,y₁) − P(x₁,y₀) + P(x₀,y₀)`
/// of the primitive `P = Φ − iΨ` of `1/(x+iy)`, which stays finite when `z`
/// lies in the cell (the centred cell integrates to 0). Cells with
/// `|a| ≥ 4h` use the convergent expansion
/// `(h²/a)·Σₘ M₄ₘ (h/a)^{4m}`, `M₄ₘ` the moments of the unit square, which
/// avoids the cancellation of the corner formula at long range.
pub fn cell_integral(a: C64, h: f64) -> C64 {
    let r2 = a.norm_sqr();
    if r2 >= (FAR_FIELD_RATIO * h) * (FAR_FIELD_RATIO * h) {
        let inv = 1.0 / a;
        let t = h * inv;
        let t2 = t * t;
        let q = t2 * t2;
        let series = 1.0 + q * (MOMENTS[0] + q * (MOMENTS[1] + q * (MOMENTS[2] + q * MOMENTS[3])));
        return h * h * inv * series;
    }
    let s = 0.5 * h;
    let (x0, x1) = (a.re - s, a.re + s);
    let (y0, y1) = (a.im - s, a.im + s);
    primitive(x1, y1) - primitive(x0, y1) - primitive(x1, y0) + primitive(x0, y0)
}
