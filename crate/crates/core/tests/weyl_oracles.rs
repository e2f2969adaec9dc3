//! Root data, shift constants and Weyl polynomials checked against an
//! independent Weyl-dimension oracle that regenerates each positive system
//! from its Cartan matrix.

use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use zetascope_core::mtype::MType;
use zetascope_core::rational::{q, qi, Q};
use zetascope_core::space::{dot, Family, SpacePreset};

fn sp(f: Family, r: u32) -> SpacePreset {
    SpacePreset::new(f, r).unwrap()
}

fn unit(n: usize, i: usize) -> Vec<Q> {
    let mut v = vec![Q::zero(); n];
    v[i] = Q::one();
    v
}

fn sub(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Simple roots of the positive system used by each chart.
fn simple_roots(s: &SpacePreset) -> Vec<Vec<Q>> {
    let d = s.coord_dim();
    match s.family {
        Family::RealH => {
            let mut v: Vec<Vec<Q>> = (0..d - 1).map(|i| sub(&unit(d, i), &unit(d, i + 1))).collect();
            v.push(unit(d, d - 1));
            v
        }
        Family::ComplexH => {
            let n = d - 1;
            let mut order = vec![0usize];
            order.extend(2..=n);
            order.push(1);
            order.windows(2).map(|w| sub(&unit(d, w[0]), &unit(d, w[1]))).collect()
        }
        Family::QuaternionicH => {
            let mut v: Vec<Vec<Q>> = (0..d - 1).map(|i| sub(&unit(d, i), &unit(d, i + 1))).collect();
            v.push(unit(d, d - 1).iter().map(|x| x * qi(2)).collect());
            v
        }
        Family::CayleyH => vec![
            sub(&unit(4, 1), &unit(4, 2)),
            sub(&unit(4, 2), &unit(4, 3)),
            unit(4, 3),
            vec![q(1, 2), q(-1, 2), q(-1, 2), q(-1, 2)],
        ],
    }
}

/// Positive roots in the simple-root basis, generated by root strings.
fn positive_roots_from_cartan(a: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let r = a.len();
    let mut roots: Vec<Vec<i64>> = (0..r)
        .map(|i| {
            let mut v = vec![0; r];
            v[i] = 1;
            v
        })
        .collect();
    let mut idx = 0;
    while idx < roots.len() {
        let beta = roots[idx].clone();
        for i in 0..r {
            // p = how many times α_i can be subtracted
            let mut p = 0;
            loop {
                let mut down = beta.clone();
                down[i] -= p + 1;
                if roots.contains(&down) {
                    p += 1;
                } else {
                    break;
                }
            }
            let pairing: i64 = (0..r).map(|j| beta[j] * a[j][i]).sum();
            if p - pairing > 0 {
                let mut up = beta.clone();
                up[i] += 1;
                if !roots.contains(&up) {
                    roots.push(up);
                }
            }
        }
        idx += 1;
    }
    roots
}

struct Oracle {
    simple: Vec<Vec<Q>>,
    half_len: Vec<Q>,
    roots: Vec<Vec<i64>>,
}

impl Oracle {
    fn new(s: &SpacePreset) -> Self {
        let simple = simple_roots(s);
        let r = simple.len();
        let mut a = vec![vec![0i64; r]; r];
        for i in 0..r {
            for j in 0..r {
                let v = qi(2) * dot(&simple[i], &simple[j]) / dot(&simple[j], &simple[j]);
                assert!(v.is_integer());
                a[i][j] = v.to_integer().try_into().unwrap();
            }
        }
        let half_len = simple.iter().map(|x| dot(x, x) / qi(2)).collect();
        let roots = positive_roots_from_cartan(&a);
        Oracle { simple, half_len, roots }
    }

    fn dynkin(&self, w: &[Q]) -> Vec<Q> {
        self.simple
            .iter()
            .map(|al| qi(2) * dot(w, al) / dot(al, al))
            .collect()
    }

    fn dimension(&self, w: &[Q]) -> Q {
        let a = self.dynkin(w);
        let mut out = Q::one();
        for beta in &self.roots {
            let mut num = Q::zero();
            let mut den = Q::zero();
            for i in 0..beta.len() {
                let k = qi(beta[i]) * &self.half_len[i];
                num += &k * (&a[i] + qi(1));
                den += k;
            }
            out *= num / den;
        }
        out
    }
}

fn all_spaces() -> Vec<SpacePreset> {
    let mut v = Vec::new();
    for m in 1..=5 {
        v.push(sp(Family::RealH, m));
    }
    for n in 2..=5 {
        v.push(sp(Family::ComplexH, n));
        v.push(sp(Family::QuaternionicH, n));
    }
    v.push(sp(Family::CayleyH, 2));
    v
}

#[test]
fn root_counts_match_generated_systems() {
    for s in all_spaces() {
        let o = Oracle::new(&s);
        assert_eq!(o.roots.len(), s.root_count(), "{}", s.code());
        // (dim g^c − rank g^c)/2
        assert_eq!((s.complex_dim() - s.complex_rank()) / 2, s.root_count());
    }
    assert_eq!(sp(Family::CayleyH, 2).root_count(), 24);
}

#[test]
fn rho_recomputed_from_multiplicities() {
    for m in 1..=8 {
        let s = sp(Family::RealH, m);
        assert_eq!(s.m_alpha, 2 * m - 1);
        assert_eq!(s.rho, q(2 * m as i64 - 1, 2));
    }
    for n in 2..=8 {
        let s = sp(Family::ComplexH, n);
        assert_eq!((s.m_alpha, s.m_two_alpha), (2 * n - 2, 1));
        assert_eq!(s.rho, qi(n as i64));
        let s = sp(Family::QuaternionicH, n);
        assert_eq!((s.m_alpha, s.m_two_alpha), (4 * n - 4, 3));
        assert_eq!(s.rho, qi(2 * n as i64 + 1));
    }
    let s = sp(Family::CayleyH, 2);
    assert_eq!((s.m_alpha, s.m_two_alpha, s.rho.clone()), (8, 7, qi(11)));
}

#[test]
fn rho_m_is_half_sum_of_m_roots() {
    for s in all_spaces() {
        let mut h = vec![Q::zero(); s.coord_dim()];
        for r in s.m_roots() {
            for (x, y) in h.iter_mut().zip(&r.coords) {
                *x += y / qi(2);
            }
        }
        assert_eq!(h, s.rho_m, "{}", s.code());
    }
}

#[test]
fn printed_shift_constants_reproduced() {
    // ((n−1−2p)/2)² for real forms
    for m in 1..=3u32 {
        let s = sp(Family::RealH, m);
        let n = 2 * m as i64;
        for p in 0..m {
            let sigma = if p == 0 { MType::trivial(&s) } else { MType::forms(&s, p).unwrap() };
            let x = q(n - 1 - 2 * p as i64, 2);
            assert_eq!(sigma.shift_constant().unwrap(), &x * &x);
        }
    }
    // (p+q−n)² for primitive complex forms
    for n in 2..=3u32 {
        let s = sp(Family::ComplexH, n);
        for p in 0..n {
            for qq in 0..(n - p) {
                let sigma = if p + qq == 0 { MType::trivial(&s) } else { MType::complex_pq(&s, p, qq).unwrap() };
                let x = qi(p as i64 + qq as i64 - n as i64);
                assert_eq!(sigma.shift_constant().unwrap(), &x * &x);
            }
        }
    }
    // (3n²+1)/4 for k/2
    for n in [3i64, 5] {
        let s = sp(Family::ComplexH, n as u32);
        let sigma = MType::complex_half_canonical(&s).unwrap();
        assert_eq!(sigma.shift_constant().unwrap(), q(3 * n * n + 1, 4));
    }
    // 4n² for quaternionic σ¹
    for n in [2i64, 3] {
        let s = sp(Family::QuaternionicH, n as u32);
        assert_eq!(MType::quat_sigma1(&s).unwrap().shift_constant().unwrap(), qi(4 * n * n));
    }
}

#[test]
fn catalog_eps_alpha_matches_integrality() {
    for s in all_spaces() {
        for sigma in MType::catalog(&s) {
            let allowed = MType::integral_eps_alpha(&s, &sigma.mu);
            assert!(allowed.contains(&sigma.eps_alpha), "{sigma}");
            if !(s.family == Family::RealH && s.rank_param == 1) {
                assert_eq!(allowed.len(), 1, "{sigma}");
            }
        }
    }
}

#[test]
fn catalog_dimensions_agree_with_oracle_on_m() {
    // σ^p = Λ^p ℝ^{2m−1}, spinor 2^{m−1}, σ¹ = 4(n−1), σ′ = 3
    let s = sp(Family::RealH, 4);
    assert_eq!(MType::forms(&s, 2).unwrap().dimension(), qi(21));
    assert_eq!(MType::spinor(&s).unwrap().dimension(), qi(8));
    let s = sp(Family::QuaternionicH, 3);
    assert_eq!(MType::quat_sigma1(&s).unwrap().dimension(), qi(8));
    assert_eq!(MType::quat_sigma_prime(&s).unwrap().dimension(), qi(3));
    let s = sp(Family::CayleyH, 2);
    assert_eq!(MType::spinor(&s).unwrap().dimension(), qi(8));
    assert_eq!(MType::forms(&s, 1).unwrap().dimension(), qi(7));
    assert_eq!(MType::forms(&s, 2).unwrap().dimension(), qi(21));
    let s = sp(Family::ComplexH, 4);
    // primitive (1,1)-forms on ℂ³: 9 − 1
    assert_eq!(MType::complex_pq(&s, 1, 1).unwrap().dimension(), qi(8));
}

#[test]
fn weyl_polynomial_is_dual_dimension_above_bound() {
    for s in all_spaces() {
        let o = Oracle::new(&s);
        for sigma in MType::catalog(&s) {
            let w = sigma.weyl_polynomial().unwrap();
            assert!(w.p.is_odd(), "{sigma}");
            assert_eq!(w.p.degree(), Some(s.dim_n() as usize));
            assert_eq!(w.q.degree(), Some(s.dim_n() as usize - 1));
            let lat = sigma.lattice().unwrap();
            let upper = &lat.lower_bound + qi(10) * &lat.t;
            let mut k = 0;
            loop {
                let lam = lat.point(k);
                k += 1;
                if lam > upper {
                    break;
                }
                if lam < lat.lower_bound {
                    continue;
                }
                let hw = sigma.dual_highest_weight(&lam);
                assert!(s.in_weight_lattice(&hw), "{sigma} λ={lam}");
                let dynkin = o.dynkin(&hw);
                assert!(dynkin.iter().all(|a| a.is_integer() && !a.is_negative()), "{sigma} λ={lam}");
                let pv = w.p.eval(&lam);
                assert!(pv.is_integer() && !pv.is_negative());
                assert_eq!(pv, o.dimension(&hw), "{sigma} λ={lam}");
            }
        }
    }
}

#[test]
fn classical_dimension_formulas() {
    // S²: 2l+1 at λ = l+1/2
    let w = MType::trivial(&sp(Family::RealH, 1)).weyl_polynomial().unwrap();
    for l in 0..20i64 {
        assert_eq!(w.p.eval(&q(2 * l + 1, 2)), qi(2 * l + 1));
    }
    // CP²: SU(3) irreducible (k,k) has dimension (k+1)³ at λ = 2k+2
    let w = MType::trivial(&sp(Family::ComplexH, 2)).weyl_polynomial().unwrap();
    for k in 0..20i64 {
        assert_eq!(w.p.eval(&qi(2 * k + 2)), qi((k + 1).pow(3)));
    }
    // S⁴ with σ¹: SO(5) highest weight (a, 1), dim (2a+3)·3·a·(a+3)/6
    let sig = MType::forms(&sp(Family::RealH, 2), 1).unwrap();
    let w = sig.weyl_polynomial().unwrap();
    for a in 1..20i64 {
        let lam = q(2 * a + 3, 2);
        assert_eq!(w.p.eval(&lam), qi((2 * a + 3) * 3 * a * (a + 3) / 6));
    }
    // below the bound P may be negative: P(1/2, σ¹) = −1
    assert_eq!(w.p.eval(&q(1, 2)), qi(-1));
    assert_eq!(sig.lattice().unwrap().lower_bound, q(5, 2));
}

#[test]
fn trivial_shift_is_rho_squared() {
    for s in all_spaces() {
        assert_eq!(MType::trivial(&s).shift_constant().unwrap(), &s.rho * &s.rho);
    }
}

proptest! {
    #[test]
    fn random_dominant_weights_give_odd_polynomials(
        a in 0i64..4, b in 0i64..4, half in proptest::bool::ANY
    ) {
        // RealH m = 3: μ = (0; x, y) with x ≥ y ≥ 0, all integer or all half-integer
        let s = sp(Family::RealH, 3);
        let (x, y) = if half {
            (q(2 * (a + b) + 1, 2), q(2 * b + 1, 2))
        } else {
            (qi(a + b), qi(b))
        };
        let eps = if half { q(1, 2) } else { Q::zero() };
        let sigma = MType::new(&s, vec![Q::zero(), x, y], eps, None).unwrap();
        let w = sigma.weyl_polynomial().unwrap();
        prop_assert!(w.p.is_odd());
        prop_assert!(w.q.is_even());
        let lat = sigma.lattice().unwrap();
        let o = Oracle::new(&s);
        let lam = &lat.lower_bound + qi(2);
        if lat.contains(&lam) {
            prop_assert_eq!(w.p.eval(&lam), o.dimension(&sigma.dual_highest_weight(&lam)));
        }
    }
}
