//! Small planar helpers on complex numbers.

use num_complex::Complex64 as C64;
use std::f64::consts::TAU;

#[inline]
pub fn cross(a: C64, b: C64) -> f64 {
    a.re * b.im - a.im * b.re
}

#[inline]
pub fn dot(a: C64, b: C64) -> f64 {
    a.re * b.re + a.im * b.im
}

/// Signed area by the shoelace formula.
pub fn signed_area(pts: &[C64]) -> f64 {
    let n = pts.len();
    (0..n).map(|i| cross(pts[i], pts[(i + 1) % n])).sum::<f64>() / 2.0
}

/// Angle of `z` in `[0, 2π)`.
pub fn angle(z: C64) -> f64 {
    let a = z.im.atan2(z.re);
    if a < 0.0 {
        a + TAU
    } else {
        a
    }
}

/// Counterclockwise angle from `a` to `b`, in `[0, 2π)`.
pub fn ccw_angle(a: C64, b: C64) -> f64 {
    let t = cross(a, b).atan2(dot(a, b));
    if t < 0.0 {
        t + TAU
    } else {
        t
    }
}

pub fn point_segment_distance(p: C64, a: C64, b: C64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = (dot(p - a, ab) / len2).clamp(0.0, 1.0);
    (p - (a + ab * t)).norm()
}

pub fn segments_cross(a: C64, b: C64, c: C64, d: C64) -> bool {
    let d1 = cross(b - a, c - a);
    let d2 = cross(b - a, d - a);
    let d3 = cross(d - c, a - c);
    let d4 = cross(d - c, b - c);
    (d1 > 0.0) != (d2 > 0.0) && (d3 > 0.0) != (d4 > 0.0) && d1 != 0.0 && d2 != 0.0
}

pub fn segment_distance(a: C64, b: C64, c: C64, d: C64) -> f64 {
    if segments_cross(a, b, c, d) {
        return 0.0;
    }
    point_segment_distance(a, c, d)
        .min(point_segment_distance(b, c, d))
        .min(point_segment_distance(c, a, b))
        .min(point_segment_distance(d, a, b))
}

/// Closed point-in-triangle test with tolerance `eps` on the barycentric
/// side distances.
pub fn in_triangle_closed(p: C64, a: C64, b: C64, c: C64, eps: f64) -> bool {
    let s = |u: C64, v: C64| {
        let e = v - u;
        cross(e, p - u) / e.norm().max(f64::MIN_POSITIVE)
    };
    s(a, b) >= -eps && s(b, c) >= -eps && s(c, a) >= -eps
}

/// Parameter `s` such that `origin + s * dir` lies on the line through
/// `a` and `b`, with `u` the position along `a→b`. Returns `None` for
/// parallel lines.
pub fn ray_line_intersection(origin: C64, dir: C64, a: C64, b: C64) -> Option<(f64, f64)> {
    let e = b - a;
    let denom = cross(dir, e);
    if denom.abs() < 1e-300 {
        return None;
    }
    let w = a - origin;
    let s = cross(w, e) / denom;
    let u = cross(w, dir) / denom;
    Some((s, u))
}
