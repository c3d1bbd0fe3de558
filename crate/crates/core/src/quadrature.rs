//! Fixed quadrature rules: triangle rules of degree 2 and 5, and slabwise
//! Simpson in time.

/// A quadrature point in barycentric coordinates with its weight relative to
/// the element area.
#[derive(Debug, Clone, Copy)]
pub struct BaryPoint {
    pub lambda: [f64; 3],
    pub weight: f64,
}

/// Edge-midpoint rule, exact for polynomials of degree 2. Sufficient for
/// products of two affine functions.
pub const TRI_MIDPOINT_3: [BaryPoint; 3] = [
    BaryPoint { lambda: [0.5, 0.5, 0.0], weight: 1.0 / 3.0 },
    BaryPoint { lambda: [0.0, 0.5, 0.5], weight: 1.0 / 3.0 },
    BaryPoint { lambda: [0.5, 0.0, 0.5], weight: 1.0 / 3.0 },
];

// Radon's 7-point rule, degree 5.
const A1: f64 = 0.059_715_871_789_77;
const B1: f64 = 0.470_142_064_105_115;
const W1: f64 = 0.132_394_152_788_506;
const A2: f64 = 0.797_426_985_353_087;
const B2: f64 = 0.101_286_507_323_456;
const W2: f64 = 0.125_939_180_544_827;

/// 7-point rule, exact for polynomials of degree 5. Used for all
/// manufactured-solution data terms and norm oracles.
pub const TRI_RADON_7: [BaryPoint; 7] = [
    BaryPoint { lambda: [1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0], weight: 0.225 },
    BaryPoint { lambda: [A1, B1, B1], weight: W1 },
    BaryPoint { lambda: [B1, A1, B1], weight: W1 },
    BaryPoint { lambda: [B1, B1, A1], weight: W1 },
    BaryPoint { lambda: [A2, B2, B2], weight: W2 },
    BaryPoint { lambda: [B2, A2, B2], weight: W2 },
    BaryPoint { lambda: [B2, B2, A2], weight: W2 },
];

/// Maps a barycentric point to physical coordinates.
pub fn bary_to_xy(p: &[[f64; 2]; 3], lambda: [f64; 3]) -> [f64; 2] {
    [
        lambda[0] * p[0][0] + lambda[1] * p[1][0] + lambda[2] * p[2][0],
        lambda[0] * p[0][1] + lambda[1] * p[1][1] + lambda[2] * p[2][1],
    ]
}

/// Integrates `f` over the triangle with corners `p` using the given rule.
pub fn integrate_tri(
    p: &[[f64; 2]; 3],
    area: f64,
    rule: &[BaryPoint],
    mut f: impl FnMut(f64, f64) -> f64,
) -> f64 {
    let mut acc = 0.0;
    for q in rule {
        let xy = bary_to_xy(p, q.lambda);
        acc += q.weight * f(xy[0], xy[1]);
    }
    acc * area
}

/// Simpson's rule on [t0, t1], exact for cubics in time.
pub fn simpson(t0: f64, t1: f64, mut g: impl FnMut(f64) -> f64) -> f64 {
    let tm = 0.5 * (t0 + t1);
    (t1 - t0) / 6.0 * (g(t0) + 4.0 * g(tm) + g(t1))
}

#[cfg(test)]
mod tests {
    use super::*;

    const UNIT: [[f64; 2]; 3] = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]];

    #[test]
    fn midpoint_rule_exact_degree_two() {
        // ∫ x y over the reference triangle = 1/24
        let v = integrate_tri(&UNIT, 0.5, &TRI_MIDPOINT_3, |x, y| x * y);
        assert!((v - 1.0 / 24.0).abs() < 1e-15);
    }

    #[test]
    fn radon_rule_exact_degree_five() {
        // ∫ x⁵ over the reference triangle = 1/42, ∫ x³y² = 1/840
        let v5 = integrate_tri(&UNIT, 0.5, &TRI_RADON_7, |x, _| x.powi(5));
        assert!((v5 - 1.0 / 42.0).abs() < 1e-14);
        let v32 = integrate_tri(&UNIT, 0.5, &TRI_RADON_7, |x, y| x.powi(3) * y * y);
        assert!((v32 - 1.0 / 840.0).abs() < 1e-15);
    }

    #[test]
    fn simpson_exact_for_cubics() {
        let v = simpson(0.0, 2.0, |t| t * t * t);
        assert!((v - 4.0).abs() < 1e-14);
    }
}
