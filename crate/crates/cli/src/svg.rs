//! Deterministic SVG rendering of 2-D polyhedra.
//!
//! Conventions: y axis points up, one lattice unit is 40px, the origin is
//! marked, vertices are labeled with their exact coordinates, and rays are
//! clipped to the viewport and carry arrowheads. Identical input produces
//! byte-identical output: coordinates are computed in exact rationals and
//! printed through fixed-point formatting.

use num::{BigInt, BigRational, One, Signed, Zero};
use tlg_core::json::fmt_rat;
use tlg_core::polyhedra::Polyhedron;
use tlg_core::{Error, Result};

const UNIT: i64 = 40;
const MARGIN: i64 = 20;

pub fn render_2d(poly: &Polyhedron) -> Result<String> {
    if poly.ambient_dim() != 2 {
        return Err(Error::InvalidInput(format!(
            "plot needs a 2-dimensional polyhedron, got dimension {}",
            poly.ambient_dim()
        )));
    }
    let vrep = poly.vertices_and_rays()?;
    let q = |n: i64| BigRational::from(BigInt::from(n));

    // Ray anchor: the first (lexicographically smallest) vertex, else 0.
    let anchor: Vec<BigRational> = vrep
        .points
        .first()
        .cloned()
        .unwrap_or_else(|| vec![BigRational::zero(), BigRational::zero()]);

    // Bounding box over vertices, the origin, and ray probes.
    let mut xs = vec![BigRational::zero()];
    let mut ys = vec![BigRational::zero()];
    for v in &vrep.points {
        xs.push(v[0].clone());
        ys.push(v[1].clone());
    }
    for r in &vrep.rays {
        xs.push(&anchor[0] + BigRational::from(r[0].clone()) * q(2));
        ys.push(&anchor[1] + BigRational::from(r[1].clone()) * q(2));
    }
    let xmin = xs.iter().min().expect("nonempty").floor() - q(1);
    let xmax = xs.iter().max().expect("nonempty").ceil() + q(1);
    let ymin = ys.iter().min().expect("nonempty").floor() - q(1);
    let ymax = ys.iter().max().expect("nonempty").ceil() + q(1);

    let px = |x: &BigRational| -> BigRational { (x - &xmin) * q(UNIT) + q(MARGIN) };
    let py = |y: &BigRational| -> BigRational { (&ymax - y) * q(UNIT) + q(MARGIN) };
    let width = fixed(&((&xmax - &xmin) * q(UNIT) + q(2 * MARGIN)));
    let height = fixed(&((&ymax - &ymin) * q(UNIT) + q(2 * MARGIN)));

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">\n"
    ));
    out.push_str("  <defs>\n");
    out.push_str("    <marker id=\"arrow\" markerWidth=\"10\" markerHeight=\"8\" refX=\"9\" refY=\"4\" orient=\"auto\" fill=\"#444444\">\n");
    out.push_str("      <polygon points=\"0 0, 10 4, 0 8\"/>\n");
    out.push_str("    </marker>\n");
    out.push_str(&format!(
        "    <clipPath id=\"vp\"><rect x=\"0\" y=\"0\" width=\"{width}\" height=\"{height}\"/></clipPath>\n"
    ));
    out.push_str("  </defs>\n");
    out.push_str("  <g clip-path=\"url(#vp)\">\n");

    // Lattice grid; the axes draw darker.
    let mut gx = xmin.clone();
    while gx <= xmax {
        let color = if gx.is_zero() { "#888888" } else { "#dddddd" };
        out.push_str(&line(&px(&gx), &py(&ymax), &px(&gx), &py(&ymin), color, "1", ""));
        gx += BigRational::one();
    }
    let mut gy = ymin.clone();
    while gy <= ymax {
        let color = if gy.is_zero() { "#888888" } else { "#dddddd" };
        out.push_str(&line(&px(&xmin), &py(&gy), &px(&xmax), &py(&gy), color, "1", ""));
        gy += BigRational::one();
    }

    // Facet edges.
    if poly.interior_point().is_some() {
        let span = (&xmax - &xmin) + (&ymax - &ymin) + q(4);
        let facets = poly.facet_rows()?;
        for &i in &facets.facet_indices {
            let row = poly.normals().row(i);
            let alpha = &poly.offsets()[i];
            let mut tight: Vec<&Vec<BigRational>> = vrep
                .points
                .iter()
                .filter(|v| {
                    let val: BigRational = row
                        .iter()
                        .zip(v.iter())
                        .map(|(a, b)| BigRational::from(a.clone()) * b)
                        .sum();
                    val + alpha == BigRational::zero()
                })
                .collect();
            tight.sort();
            let tight_rays: Vec<&Vec<BigInt>> = vrep
                .rays
                .iter()
                .filter(|r| {
                    let val: BigInt = row.iter().zip(r.iter()).map(|(a, b)| a * b).sum();
                    val.is_zero()
                })
                .collect();
            let mut segments: Vec<(Vec<BigRational>, Vec<BigRational>)> = Vec::new();
            match tight.len() {
                0 => {
                    // The full facet line, anchored at its point closest to 0.
                    let norm2: BigRational = row
                        .iter()
                        .map(|a| BigRational::from(a.clone()) * BigRational::from(a.clone()))
                        .sum();
                    let scale = -alpha / norm2;
                    let p0: Vec<BigRational> = row
                        .iter()
                        .map(|a| BigRational::from(a.clone()) * &scale)
                        .collect();
                    let dir = [BigRational::from(-row[1].clone()),
                        BigRational::from(row[0].clone())];
                    let a_end: Vec<BigRational> =
                        p0.iter().zip(dir.iter()).map(|(p, d)| p + d * &span).collect();
                    let b_end: Vec<BigRational> =
                        p0.iter().zip(dir.iter()).map(|(p, d)| p - d * &span).collect();
                    segments.push((a_end, b_end));
                }
                1 => {
                    for r in &tight_rays {
                        let end: Vec<BigRational> = tight[0]
                            .iter()
                            .zip(r.iter())
                            .map(|(p, d)| p + BigRational::from(d.clone()) * &span)
                            .collect();
                        segments.push((tight[0].clone(), end));
                    }
                }
                _ => {
                    segments.push((tight[0].clone(), tight[tight.len() - 1].clone()));
                }
            }
            for (a, b) in segments {
                out.push_str(&line(
                    &px(&a[0]),
                    &py(&a[1]),
                    &px(&b[0]),
                    &py(&b[1]),
                    "#1f3d7a",
                    "2",
                    "",
                ));
            }
        }
    }

    // Recession rays with arrowheads.
    for r in &vrep.rays {
        let end = [
            &anchor[0] + BigRational::from(r[0].clone()) * q(2),
            &anchor[1] + BigRational::from(r[1].clone()) * q(2),
        ];
        out.push_str(&line(
            &px(&anchor[0]),
            &py(&anchor[1]),
            &px(&end[0]),
            &py(&end[1]),
            "#444444",
            "1.5",
            " marker-end=\"url(#arrow)\"",
        ));
    }

    // Origin marker.
    out.push_str(&format!(
        "    <circle cx=\"{}\" cy=\"{}\" r=\"3\" fill=\"none\" stroke=\"#888888\" stroke-width=\"1\"/>\n",
        fixed(&px(&BigRational::zero())),
        fixed(&py(&BigRational::zero()))
    ));

    // Vertices with exact labels.
    for v in &vrep.points {
        out.push_str(&format!(
            "    <circle cx=\"{}\" cy=\"{}\" r=\"3.5\" fill=\"#b22222\"/>\n",
            fixed(&px(&v[0])),
            fixed(&py(&v[1]))
        ));
        out.push_str(&format!(
            "    <text x=\"{}\" y=\"{}\" font-size=\"11\" font-family=\"monospace\" fill=\"#222222\">({}, {})</text>\n",
            fixed(&(px(&v[0]) + q(6))),
            fixed(&(py(&v[1]) - q(6))),
            escape(&fmt_rat(&v[0])),
            escape(&fmt_rat(&v[1]))
        ));
    }

    out.push_str("  </g>\n");
    out.push_str("</svg>\n");
    Ok(out)
}

fn line(
    x1: &BigRational,
    y1: &BigRational,
    x2: &BigRational,
    y2: &BigRational,
    color: &str,
    width: &str,
    extra: &str,
) -> String {
    format!(
        "    <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\" stroke-width=\"{}\"{}/>\n",
        fixed(x1),
        fixed(y1),
        fixed(x2),
        fixed(y2),
        color,
        width,
        extra
    )
}

/// Fixed-point (2 decimals) rendering of an exact rational, rounding half
/// up.
fn fixed(x: &BigRational) -> String {
    let scaled = x * BigRational::from(BigInt::from(100));
    let rounded = (scaled + BigRational::new(BigInt::from(1), BigInt::from(2))).floor();
    let cents = rounded.to_integer();
    let sign = if cents.is_negative() { "-" } else { "" };
    let abs = cents.abs();
    let whole = &abs / BigInt::from(100);
    let frac = &abs % BigInt::from(100);
    format!("{sign}{whole}.{frac:02}")
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
