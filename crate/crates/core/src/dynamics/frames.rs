use num_complex::Complex64 as C64;

use crate::schedules::DEFAULT_L_MIN;
use crate::{Error, FixedGrid, Frame, Mesh, Result, WaveField};

fn check_length(l: f64) -> Result<()> {
    if !(l >= DEFAULT_L_MIN) {
        return Err(Error::WallCollision { t: f64::NAN, l, l_min: DEFAULT_L_MIN });
    }
    Ok(())
}

/// `φ(ξ) = √l ψ(lξ + d)` on `grid`, with cubic interpolation of `ψ`.
pub fn frame_map(psi: &WaveField, l: f64, d: f64, grid: &FixedGrid) -> Result<WaveField> {
    psi.expect_frame(Frame::MovingWall)?;
    check_length(l)?;
    let scale = l.sqrt();
    let values = psi.interpolate(grid.nodes().into_iter().map(|xi| l * xi + d));
    let amplitudes = values.into_iter().map(|z| z * scale).collect();
    WaveField::fixed(grid, psi.time, amplitudes)
}

/// `ψ(x) = φ((x - d)/l) / √l` on the `n_cells` mesh of `[d - l/2, d + l/2]`.
pub fn frame_unmap(phi: &WaveField, l: f64, d: f64, n_cells: usize) -> Result<WaveField> {
    phi.expect_frame(Frame::FixedBox)?;
    check_length(l)?;
    let mesh = Mesh::new(d - 0.5 * l, d + 0.5 * l, n_cells)?;
    let scale = 1.0 / l.sqrt();
    let amplitudes: Vec<C64> = if n_cells == phi.mesh.n_cells {
        // nodes coincide with the reference grid
        phi.amplitudes.iter().map(|z| z * scale).collect()
    } else {
        phi.interpolate(mesh.nodes().into_iter().map(|x| (x - d) / l))
            .into_iter()
            .map(|z| z * scale)
            .collect()
    };
    WaveField::moving(mesh, phi.time, amplitudes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{PI, SQRT_2};

    fn physical_ground(l: f64, d: f64, n: usize) -> WaveField {
        let mesh = Mesh::new(d - 0.5 * l, d + 0.5 * l, n).unwrap();
        let amps = mesh
            .nodes()
            .into_iter()
            .map(|x| C64::new((2.0 / l).sqrt() * (PI * (x - d + 0.5 * l) / l).sin(), 0.0))
            .collect();
        WaveField::moving(mesh, 0.0, amps).unwrap()
    }

    #[test]
    fn ground_state_maps_to_reference_mode() {
        let g = FixedGrid::new(128).unwrap();
        for (l, d) in [(1.0, 0.0), (2.5, -0.7), (0.4, 3.0)] {
            // a physical mesh with a different resolution forces interpolation
            let psi = physical_ground(l, d, 300);
            let phi = frame_map(&psi, l, d, &g).unwrap();
            for (xi, z) in g.nodes().iter().zip(&phi.amplitudes) {
                assert!((z.re - SQRT_2 * (PI * xi).cos()).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn identity_when_unit_box_at_origin() {
        let g = FixedGrid::new(64).unwrap();
        let psi = physical_ground(1.0, 0.0, 64);
        let phi = frame_map(&psi, 1.0, 0.0, &g).unwrap();
        for (a, b) in phi.amplitudes.iter().zip(&psi.amplitudes) {
            assert!((a - b).norm() < 1e-14);
        }
        let back = frame_unmap(&phi, 1.0, 0.0, 64).unwrap();
        assert_eq!(back.amplitudes, phi.amplitudes);
    }

    #[test]
    fn unmap_substitution() {
        let g = FixedGrid::new(64).unwrap();
        let phi = WaveField::from_fn(&g, 0.0, |x| C64::new(SQRT_2 * (PI * x).cos(), 0.0));
        let psi = frame_unmap(&phi, 2.0, 1.0, 64).unwrap();
        assert_eq!((psi.mesh.left, psi.mesh.right), (0.0, 2.0));
        for (i, z) in psi.amplitudes.iter().enumerate() {
            let x = psi.mesh.node(i);
            assert!((z.re - (PI * (x - 1.0) / 2.0).cos()).abs() < 1e-14);
        }
        assert!((psi.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn collapsed_box_is_rejected() {
        let g = FixedGrid::new(16).unwrap();
        let phi = WaveField::from_fn(&g, 0.0, |_| C64::new(1.0, 0.0));
        assert!(matches!(frame_unmap(&phi, 0.0, 0.0, 16), Err(Error::WallCollision { .. })));
    }
}
