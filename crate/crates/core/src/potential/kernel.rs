use crate::Vec3;

/// `∫_T dσ(p) / |p − r|` over a flat triangle, in closed form.
///
/// Edge decomposition around the projection of `r` onto the triangle's
/// plane; valid for any `r` off the edges' extensions. `normal` must be the
/// unit normal matching the corner winding.
pub fn triangle_inverse_distance(corners: &[Vec3; 3], normal: &Vec3, r: &Vec3) -> f64 {
    let w = (r - corners[0]).dot(normal);
    let foot = r - normal * w;
    let aw = w.abs();
    let mut total = 0.0;
    for k in 0..3 {
        let (p, q) = (corners[k], corners[(k + 1) % 3]);
        let edge = q - p;
        let s = edge / edge.norm();
        let m = s.cross(normal);
        let t0 = (p - foot).dot(&m);
        let s_minus = (p - foot).dot(&s);
        let s_plus = (q - foot).dot(&s);
        let r0_sq = t0 * t0 + w * w;
        let r_minus = (r0_sq + s_minus * s_minus).sqrt();
        let r_plus = (r0_sq + s_plus * s_plus).sqrt();

        if t0.abs() > 1e-300 {
            // ln(R + s), rewritten for s < 0 to avoid cancellation.
            let log_sum = |radius: f64, s: f64| {
                if s >= 0.0 {
                    (radius + s).ln()
                } else {
                    r0_sq.ln() - (radius - s).ln()
                }
            };
            total += t0 * (log_sum(r_plus, s_plus) - log_sum(r_minus, s_minus));
        }
        if aw > 0.0 {
            total -= aw
                * ((t0 * s_plus).atan2(r0_sq + aw * r_plus) - (t0 * s_minus).atan2(r0_sq + aw * r_minus));
        }
    }
    total
}
