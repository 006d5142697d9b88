//! Reflection-parity sectors on symmetric periodic grids.
//!
//! A multi-component grid function is laid out component-major: component
//! `c` occupies indices `c·N .. (c+1)·N`. A sector is fixed by one sign per
//! component, `(Pf)_c(x) = s_c·f_c(−x)`, and spanned by an orthonormal basis
//! of at most two-node vectors. Operators commuting with `P` reduce to
//! `QᵀAQ` on each sector.

use faer::Mat;

use crate::grid::Grid1D;

#[derive(Clone, Copy, Debug)]
struct BasisVector {
    first: usize,
    second: Option<(usize, f64)>,
    node: usize,
}

#[derive(Clone, Debug)]
pub struct SectorBasis {
    n_nodes: usize,
    signs: Vec<f64>,
    vectors: Vec<BasisVector>,
}

impl SectorBasis {
    pub fn new(grid: &Grid1D, signs: &[f64]) -> Self {
        let n = grid.n_points;
        let mut vectors = Vec::with_capacity(signs.len() * (n / 2 + 1));
        for (c, &s) in signs.iter().enumerate() {
            let offset = c * n;
            for j in 0..=n / 2 {
                let r = grid.reflect(j);
                if r == j {
                    if s > 0.0 {
                        vectors.push(BasisVector { first: offset + j, second: None, node: j });
                    }
                } else {
                    vectors.push(BasisVector { first: offset + j, second: Some((offset + r, s)), node: j });
                }
            }
        }
        Self { n_nodes: n, signs: signs.to_vec(), vectors }
    }

    /// The two sectors `(+signs, −signs)`.
    pub fn pair(grid: &Grid1D, signs: &[f64]) -> [SectorBasis; 2] {
        let neg: Vec<f64> = signs.iter().map(|s| -s).collect();
        [SectorBasis::new(grid, signs), SectorBasis::new(grid, &neg)]
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn full_len(&self) -> usize {
        self.n_nodes * self.signs.len()
    }

    pub fn signs(&self) -> &[f64] {
        &self.signs
    }

    /// Grid node carrying basis vector `a` (its mirror has the same |x|).
    pub fn node_of(&self, a: usize) -> usize {
        self.vectors[a].node
    }

    fn entries(&self, a: usize) -> ([(usize, f64); 2], usize) {
        let v = self.vectors[a];
        match v.second {
            None => ([(v.first, 1.0), (0, 0.0)], 1),
            Some((r, s)) => {
                let c = std::f64::consts::FRAC_1_SQRT_2;
                ([(v.first, c), (r, s * c)], 2)
            }
        }
    }

    /// `Qᵀx`.
    pub fn restrict(&self, x: &[f64]) -> Vec<f64> {
        (0..self.dim())
            .map(|a| {
                let (e, k) = self.entries(a);
                e[..k].iter().map(|&(i, w)| w * x[i]).sum()
            })
            .collect()
    }

    /// `Qy`.
    pub fn lift(&self, y: &[f64]) -> Vec<f64> {
        let mut x = vec![0.0; self.full_len()];
        for (a, &ya) in y.iter().enumerate() {
            let (e, k) = self.entries(a);
            for &(i, w) in &e[..k] {
                x[i] += w * ya;
            }
        }
        x
    }

    /// `QᵀAQ`.
    pub fn reduce(&self, a: &Mat<f64>) -> Mat<f64> {
        let d = self.dim();
        let entries: Vec<_> = (0..d).map(|k| self.entries(k)).collect();
        Mat::from_fn(d, d, |r, c| {
            let (er, kr) = entries[r];
            let (ec, kc) = entries[c];
            let mut acc = 0.0;
            for &(i, wi) in &er[..kr] {
                for &(j, wj) in &ec[..kc] {
                    acc += wi * wj * a[(i, j)];
                }
            }
            acc
        })
    }

    /// `(Px)` with `P` the parity operator whose +1 eigenspace is this sector.
    pub fn apply_parity(&self, grid: &Grid1D, x: &[f64]) -> Vec<f64> {
        let n = self.n_nodes;
        let mut out = vec![0.0; x.len()];
        for (c, &s) in self.signs.iter().enumerate() {
            for j in 0..n {
                out[c * n + j] = s * x[c * n + grid.reflect(j)];
            }
        }
        out
    }

    /// `max |PAP − A|`, zero when `A` commutes with the parity operator.
    pub fn commutator_defect(&self, grid: &Grid1D, a: &Mat<f64>) -> f64 {
        let n = self.n_nodes;
        let len = self.full_len();
        let perm = |i: usize| {
            let c = i / n;
            (c * n + grid.reflect(i % n), self.signs[c])
        };
        let mut defect = 0.0f64;
        for i in 0..len {
            let (pi, si) = perm(i);
            for j in 0..len {
                let (pj, sj) = perm(j);
                defect = defect.max((si * sj * a[(pi, pj)] - a[(i, j)]).abs());
            }
        }
        defect
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sectors_partition_the_space() {
        let g = Grid1D::fourier(3.0, 12).unwrap();
        let [even, odd] = SectorBasis::pair(&g, &[1.0, -1.0]);
        assert_eq!(even.dim() + odd.dim(), 24);
        // orthonormality through restrict∘lift = id
        let y: Vec<f64> = (0..even.dim()).map(|i| (i as f64).sin()).collect();
        let back = even.restrict(&even.lift(&y));
        for (a, b) in y.iter().zip(&back) {
            assert!((a - b).abs() < 1e-14);
        }
        // lifted vectors are parity eigenvectors
        let x = even.lift(&y);
        let px = even.apply_parity(&g, &x);
        for (a, b) in x.iter().zip(&px) {
            assert!((a - b).abs() < 1e-14);
        }
        let z: Vec<f64> = (0..odd.dim()).map(|i| (i as f64).cos()).collect();
        let xo = odd.lift(&z);
        // odd-sector vectors are orthogonal to even-sector vectors
        let dot: f64 = x.iter().zip(&xo).map(|(a, b)| a * b).sum();
        assert!(dot.abs() < 1e-13);
    }

    #[test]
    fn reduce_matches_explicit_product() {
        let g = Grid1D::fourier(2.0, 8).unwrap();
        let d2 = g.second_derivative_matrix();
        let [even, _] = SectorBasis::pair(&g, &[1.0]);
        assert!(even.commutator_defect(&g, &d2) < 1e-12);
        let r = even.reduce(&d2);
        for b in 0..even.dim() {
            let mut e = vec![0.0; even.dim()];
            e[b] = 1.0;
            let col = even.restrict(&crate::grid::matvec(&d2, &even.lift(&e)));
            for a in 0..even.dim() {
                assert!((col[a] - r[(a, b)]).abs() < 1e-12);
            }
        }
    }
}
