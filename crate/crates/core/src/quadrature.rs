//! Quadrature on the reference triangle `(0,0), (1,0), (0,1)` and the
//! reference edge `[0, 1]`.
//!
//! Triangle rules up to degree 5 are the classical symmetric rules (centroid,
//! three-point, seven-point Radon). Higher degrees use a collapsed
//! Gauss–Legendre product rule, which keeps all points strictly inside the
//! element and all weights positive.

/// Rule on the reference triangle; points in barycentric coordinates,
/// weights summing to `1/2`.
#[derive(Clone, Debug, PartialEq)]
pub struct TriangleRule {
    points: Vec<[f64; 3]>,
    weights: Vec<f64>,
    exact_degree: usize,
}

/// Rule on `[0, 1]`; weights summing to `1`.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeRule {
    points: Vec<f64>,
    weights: Vec<f64>,
    exact_degree: usize,
}

impl TriangleRule {
    /// Cheapest available rule that integrates polynomials of total degree
    /// `degree` exactly.
    pub fn with_degree(degree: usize) -> Self {
        match degree {
            0 | 1 => TriangleRule {
                points: vec![[1.0 / 3.0; 3]],
                weights: vec![0.5],
                exact_degree: 1,
            },
            2 => {
                let (a, b) = (2.0 / 3.0, 1.0 / 6.0);
                TriangleRule {
                    points: vec![[a, b, b], [b, a, b], [b, b, a]],
                    weights: vec![1.0 / 6.0; 3],
                    exact_degree: 2,
                }
            }
            3..=5 => radon7(),
            d => collapsed_gauss(d),
        }
    }

    /// Composite rule on the `4^depth` children of `depth` red refinements.
    pub fn subdivided(&self, depth: usize) -> Self {
        let mut cells: Vec<[[f64; 3]; 3]> =
            vec![[[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]];
        for _ in 0..depth {
            cells = cells
                .into_iter()
                .flat_map(|[a, b, c]| {
                    let mid = |p: [f64; 3], q: [f64; 3]| {
                        [
                            0.5 * (p[0] + q[0]),
                            0.5 * (p[1] + q[1]),
                            0.5 * (p[2] + q[2]),
                        ]
                    };
                    let (ab, bc, ca) = (mid(a, b), mid(b, c), mid(c, a));
                    [[a, ab, ca], [ab, b, bc], [ca, bc, c], [ab, bc, ca]]
                })
                .collect();
        }
        let scale = 1.0 / cells.len() as f64;
        let mut points = Vec::with_capacity(cells.len() * self.len());
        let mut weights = Vec::with_capacity(cells.len() * self.len());
        for cell in &cells {
            for (p, w) in self.points.iter().zip(&self.weights) {
                let mut bary = [0.0; 3];
                for (k, vertex) in cell.iter().enumerate() {
                    for j in 0..3 {
                        bary[j] += p[k] * vertex[j];
                    }
                }
                points.push(bary);
                weights.push(w * scale);
            }
        }
        TriangleRule {
            points,
            weights,
            exact_degree: self.exact_degree,
        }
    }

    pub fn points(&self) -> &[[f64; 3]] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn exact_degree(&self) -> usize {
        self.exact_degree
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `(barycentric point, weight)` pairs.
    pub fn iter(&self) -> impl Iterator<Item = (&[f64; 3], f64)> + '_ {
        self.points.iter().zip(self.weights.iter().copied())
    }
}

impl EdgeRule {
    /// Gauss–Legendre with `⌈(degree + 1)/2⌉` points.
    pub fn with_degree(degree: usize) -> Self {
        let n = degree / 2 + 1;
        let (x, w) = gauss_legendre(n);
        EdgeRule {
            points: x.iter().map(|&t| 0.5 * (t + 1.0)).collect(),
            weights: w.iter().map(|&w| 0.5 * w).collect(),
            exact_degree: 2 * n - 1,
        }
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn exact_degree(&self) -> usize {
        self.exact_degree
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.points
            .iter()
            .copied()
            .zip(self.weights.iter().copied())
    }
}

fn radon7() -> TriangleRule {
    let s15 = 15f64.sqrt();
    let (a, b) = ((6.0 - s15) / 21.0, (9.0 + 2.0 * s15) / 21.0);
    let (c, d) = ((6.0 + s15) / 21.0, (9.0 - 2.0 * s15) / 21.0);
    let (wa, wc) = ((155.0 - s15) / 2400.0, (155.0 + s15) / 2400.0);
    TriangleRule {
        points: vec![
            [1.0 / 3.0; 3],
            [b, a, a],
            [a, b, a],
            [a, a, b],
            [d, c, c],
            [c, d, c],
            [c, c, d],
        ],
        weights: vec![9.0 / 80.0, wa, wa, wa, wc, wc, wc],
        exact_degree: 5,
    }
}

/// Duffy-collapsed square rule: `x = u`, `y = v(1 − u)` with Jacobian `1 − u`.
fn collapsed_gauss(degree: usize) -> TriangleRule {
    let n = (degree + 3) / 2;
    let (x, w) = gauss_legendre(n);
    let unit: Vec<(f64, f64)> = x
        .iter()
        .zip(&w)
        .map(|(&t, &w)| (0.5 * (t + 1.0), 0.5 * w))
        .collect();
    let mut points = Vec::with_capacity(n * n);
    let mut weights = Vec::with_capacity(n * n);
    for &(u, wu) in &unit {
        for &(v, wv) in &unit {
            let (px, py) = (u, v * (1.0 - u));
            points.push([1.0 - px - py, px, py]);
            weights.push(wu * wv * (1.0 - u));
        }
    }
    TriangleRule {
        points,
        weights,
        exact_degree: degree,
    }
}

/// Gauss–Legendre nodes and weights on `[−1, 1]`, by Newton iteration on `P_n`.
fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // three-term recurrence for P_n(x) and P_n'(x)
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let k = k as f64;
                let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 {
                1.0
            } else if n == 1 {
                x
            } else {
                p1
            };
            let pn1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * pn - pn1) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// ∫_T x^a y^b over the reference triangle = a! b! / (a + b + 2)!.
    fn monomial_exact(a: u32, b: u32) -> f64 {
        let fact = |k: u32| (1..=k).map(f64::from).product::<f64>();
        fact(a) * fact(b) / fact(a + b + 2)
    }

    #[test]
    fn triangle_rules_are_exact() {
        for degree in 1..=12 {
            let rule = TriangleRule::with_degree(degree);
            assert!(rule.exact_degree() >= degree);
            assert!(rule.weights().iter().all(|&w| w > 0.0));
            assert!((rule.weights().iter().sum::<f64>() - 0.5).abs() < 1e-15);
            for a in 0..=rule.exact_degree() as u32 {
                for b in 0..=(rule.exact_degree() as u32 - a) {
                    let q: f64 = rule
                        .iter()
                        .map(|(p, w)| w * p[1].powi(a as i32) * p[2].powi(b as i32))
                        .sum();
                    let exact = monomial_exact(a, b);
                    assert!(
                        ((q - exact) / exact).abs() < 1e-13,
                        "degree {degree}: x^{a} y^{b}: {q} vs {exact}"
                    );
                }
            }
        }
    }

    #[test]
    fn radon_is_not_exact_beyond_five() {
        let rule = TriangleRule::with_degree(5);
        assert_eq!(rule.len(), 7);
        let q: f64 = rule.iter().map(|(p, w)| w * p[1].powi(6)).sum();
        assert!((q - monomial_exact(6, 0)).abs() > 1e-8);
    }

    #[test]
    fn edge_rules_are_exact() {
        for degree in 0..=15 {
            let rule = EdgeRule::with_degree(degree);
            assert!(rule.exact_degree() >= degree);
            assert!(rule.weights().iter().all(|&w| w > 0.0));
            for k in 0..=rule.exact_degree() as i32 {
                let q: f64 = rule.iter().map(|(t, w)| w * t.powi(k)).sum();
                assert!(
                    (q - 1.0 / (k as f64 + 1.0)).abs() < 1e-14,
                    "degree {degree}, t^{k}"
                );
            }
        }
        assert_eq!(EdgeRule::with_degree(5).len(), 3);
    }

    #[test]
    fn subdivision_keeps_exactness() {
        let rule = TriangleRule::with_degree(5).subdivided(2);
        assert_eq!(rule.len(), 7 * 16);
        let q: f64 = rule
            .iter()
            .map(|(p, w)| w * p[1].powi(3) * p[2].powi(2))
            .sum();
        assert!((q - monomial_exact(3, 2)).abs() < 1e-15);
        // rougher integrand converges under subdivision
        let f = |p: &[f64; 3]| (p[1] * p[1] + p[2] * p[2]).powf(1.0 / 3.0);
        let coarse: f64 = TriangleRule::with_degree(5)
            .iter()
            .map(|(p, w)| w * f(p))
            .sum();
        let fine: f64 = TriangleRule::with_degree(5)
            .subdivided(4)
            .iter()
            .map(|(p, w)| w * f(p))
            .sum();
        let reference: f64 = TriangleRule::with_degree(5)
            .subdivided(7)
            .iter()
            .map(|(p, w)| w * f(p))
            .sum();
        assert!((fine - reference).abs() < (coarse - reference).abs());
    }
}
