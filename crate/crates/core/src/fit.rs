//! Least-squares circle fits in the plane and in space.

use nalgebra::{Matrix3, SymmetricEigen, Vector3};

use crate::error::{GeomError, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Circle2 {
    pub center: [f64; 2],
    pub radius: f64,
}

/// Algebraic (Kåsa) fit: minimizes `Σ (x² + y² + D x + E y + F)²`.
pub fn fit_circle_2d(points: &[[f64; 2]]) -> Result<Circle2> {
    if points.len() < 3 {
        return Err(GeomError::TooFewNodes {
            got: points.len(),
            need: 3,
        });
    }
    // centre the data for conditioning
    let n = points.len() as f64;
    let cx = points.iter().map(|p| p[0]).sum::<f64>() / n;
    let cy = points.iter().map(|p| p[1]).sum::<f64>() / n;
    let mut ata = Matrix3::zeros();
    let mut atb = Vector3::zeros();
    for p in points {
        let (x, y) = (p[0] - cx, p[1] - cy);
        let row = Vector3::new(x, y, 1.0);
        ata += row * row.transpose();
        atb += row * -(x * x + y * y);
    }
    let sol = ata
        .lu()
        .solve(&atb)
        .ok_or_else(|| GeomError::BadParameters("points are collinear".into()))?;
    let (d, e, f) = (sol[0], sol[1], sol[2]);
    let (ux, uy) = (-0.5 * d, -0.5 * e);
    let r2 = ux * ux + uy * uy - f;
    if !(r2 > 0.0) {
        return Err(GeomError::BadParameters("degenerate circle fit".into()));
    }
    Ok(Circle2 {
        center: [ux + cx, uy + cy],
        radius: r2.sqrt(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Circle3 {
    pub center: [f64; 3],
    pub normal: [f64; 3],
    pub radius: f64,
}

/// Best-fit plane (smallest principal axis) followed by a planar fit.
pub fn fit_circle_3d(points: &[[f64; 3]]) -> Result<Circle3> {
    if points.len() < 3 {
        return Err(GeomError::TooFewNodes {
            got: points.len(),
            need: 3,
        });
    }
    let n = points.len() as f64;
    let c = points
        .iter()
        .fold(Vector3::zeros(), |acc, p| acc + Vector3::new(p[0], p[1], p[2]))
        / n;
    let mut cov = Matrix3::zeros();
    for p in points {
        let d = Vector3::new(p[0], p[1], p[2]) - c;
        cov += d * d.transpose();
    }
    let eig = SymmetricEigen::new(cov);
    let mut order = [0usize, 1, 2];
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let normal = eig.eigenvectors.column(order[0]).into_owned();
    let e1 = eig.eigenvectors.column(order[2]).into_owned();
    let e2 = normal.cross(&e1);
    let planar: Vec<[f64; 2]> = points
        .iter()
        .map(|p| {
            let d = Vector3::new(p[0], p[1], p[2]) - c;
            [d.dot(&e1), d.dot(&e2)]
        })
        .collect();
    let circ = fit_circle_2d(&planar)?;
    let center = c + e1 * circ.center[0] + e2 * circ.center[1];
    Ok(Circle3 {
        center: [center[0], center[1], center[2]],
        normal: [normal[0], normal[1], normal[2]],
        radius: circ.radius,
    })
}
