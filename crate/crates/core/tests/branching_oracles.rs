use proptest::prelude::*;
use zetascope_core::branching::*;
use zetascope_core::mtype::MType;
use zetascope_core::space::{Family, SpacePreset};
use zetascope_core::Error;

/// Elementary symmetric polynomial `e_k(xs)`.
fn esym(xs: &[f64], k: i64) -> f64 {
    if k < 0 {
        return 0.0;
    }
    let mut e = vec![0.0; xs.len() + 2];
    e[0] = 1.0;
    for (i, &x) in xs.iter().enumerate() {
        for j in (1..=i + 1).rev() {
            e[j] += x * e[j - 1];
        }
    }
    e.get(k as usize).copied().unwrap_or(0.0)
}

fn pm(xs: &[f64]) -> Vec<f64> {
    xs.iter().flat_map(|&x| [x, 1.0 / x]).collect()
}

/// A point of the `M` torus and its image in the `K` torus, with characters
/// of every generator written from weights alone.
struct Torus {
    space: SpacePreset,
    params: Vec<f64>,
}

impl Torus {
    fn k_char(&self, g: &str) -> f64 {
        let t = &self.params;
        match self.space.family {
            Family::RealH => {
                // x_1 = 1 on M; t_i are square roots of the torus coordinates
                let mut half = vec![1.0];
                half.extend(t.iter().copied());
                let xs: Vec<f64> = half.iter().map(|h| h * h).collect();
                match g {
                    "s+" | "s-" => {
                        let want_even = g == "s+";
                        let m = half.len();
                        (0..1u32 << m)
                            .filter(|mask| (mask.count_ones() % 2 == 0) == want_even)
                            .map(|mask| (0..m).map(|i| if mask >> i & 1 == 1 { 1.0 / half[i] } else { half[i] }).product::<f64>())
                            .sum()
                    }
                    _ => esym(&pm(&xs), g[1..].parse().unwrap()),
                }
            }
            Family::ComplexH => {
                let (_, u) = self.complex_point();
                let mut uk = vec![1.0];
                uk.extend(u.iter().copied());
                let inv: Vec<f64> = uk.iter().map(|x| 1.0 / x).collect();
                if let Some(rest) = g.strip_prefix('L') {
                    let (a, b) = rest.split_once(',').unwrap();
                    let (a, b): (i64, i64) = (a.parse().unwrap(), b.parse().unwrap());
                    return esym(&uk, a) * esym(&inv, b) - esym(&uk, a - 1) * esym(&inv, b - 1);
                }
                esym(&uk, g[1..].parse().unwrap())
            }
            Family::QuaternionicH => {
                let f = t[0];
                let all = pm(t);
                match g {
                    "p" => f + 1.0 / f,
                    "l'" => f * f + 1.0 + 1.0 / (f * f),
                    _ => esym(&all, g[1..].parse().unwrap()),
                }
            }
            Family::CayleyH => unreachable!(),
        }
    }

    fn m_char(&self, g: &str) -> f64 {
        let t = &self.params;
        match self.space.family {
            Family::RealH => {
                let xs: Vec<f64> = t.iter().map(|h| h * h).collect();
                if g == "dirac" {
                    return t.iter().map(|h| h + 1.0 / h).product();
                }
                let p: i64 = g.strip_prefix("forms:p=").unwrap().parse().unwrap();
                let mut all = vec![1.0];
                all.extend(pm(&xs));
                esym(&all, p)
            }
            Family::ComplexH => {
                let (_, u) = self.complex_point();
                let inv: Vec<f64> = u.iter().map(|x| 1.0 / x).collect();
                if let Some(rest) = g.strip_prefix("pq:") {
                    let (a, b) = rest.split_once(',').unwrap();
                    let (a, b): (i64, i64) = (a.parse().unwrap(), b.parse().unwrap());
                    return esym(&u, a) * esym(&inv, b) - esym(&u, a - 1) * esym(&inv, b - 1);
                }
                esym(&u, g[1..].parse().unwrap())
            }
            Family::QuaternionicH => match g {
                "q" => t[0] + 1.0 / t[0],
                _ => esym(&pm(&t[1..]), g[1..].parse().unwrap()),
            },
            Family::CayleyH => unreachable!(),
        }
    }

    /// `z` from `z² det B = 1`, and `u_i = b_i / z`.
    fn complex_point(&self) -> (f64, Vec<f64>) {
        let z = self.params.iter().product::<f64>().powf(-0.5);
        (z, self.params.iter().map(|b| b / z).collect())
    }

    fn eval(&self, v: &VirtualRep) -> f64 {
        let (z, _) = if self.space.family == Family::ComplexH { self.complex_point() } else { (1.0, vec![]) };
        v.monomials()
            .map(|(m, c)| {
                let mut x = c as f64 * z.powi(m.twist_exponent() as i32);
                for (g, e) in m.generators() {
                    let ch = if v.group == Group::K { self.k_char(g) } else { self.m_char(g) };
                    x *= ch.powi(e as i32);
                }
                x
            })
            .sum()
    }
}

fn torus(space: &SpacePreset, seed: &[f64]) -> Torus {
    let k = match space.family {
        Family::RealH => space.rank_param as usize - 1,
        Family::ComplexH => space.rank_param as usize - 1,
        Family::QuaternionicH => space.rank_param as usize,
        Family::CayleyH => 0,
    };
    Torus { space: space.clone(), params: seed.iter().cycle().take(k).copied().collect() }
}

fn k_generators(space: &SpacePreset) -> Vec<String> {
    let n = space.rank_param;
    match space.family {
        Family::RealH => {
            let mut v: Vec<String> = (1..n).map(|p| format!("l{p}")).collect();
            v.extend(["s+".into(), "s-".into()]);
            v
        }
        Family::ComplexH => {
            let mut v: Vec<String> = (1..n).map(|p| format!("l{p}")).collect();
            for a in 0..n {
                for b in 0..n - a {
                    if a + b > 0 {
                        v.push(format!("L{a},{b}"));
                    }
                }
            }
            v
        }
        Family::QuaternionicH => {
            let mut v: Vec<String> = (1..=n).map(|p| format!("l{p}")).collect();
            v.extend(["p".into(), "l'".into()]);
            v
        }
        Family::CayleyH => vec!["l1".into(), "l2".into(), "s9".into()],
    }
}

fn spaces() -> Vec<SpacePreset> {
    let mut v: Vec<SpacePreset> = (1..=5).map(|m| SpacePreset::new(Family::RealH, m).unwrap()).collect();
    v.extend((2..=5).map(|n| SpacePreset::new(Family::ComplexH, n).unwrap()));
    v.extend((2..=4).map(|n| SpacePreset::new(Family::QuaternionicH, n).unwrap()));
    v
}

fn k(text: &str) -> VirtualRep {
    VirtualRep::parse(Group::K, text).unwrap()
}

fn m(text: &str) -> VirtualRep {
    VirtualRep::parse(Group::M, text).unwrap()
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0)
}

#[test]
fn generators_match_characters() {
    let seeds = [[1.3, 0.7, 2.1, 0.45, 1.9], [0.8, 1.6, 0.55, 1.15, 2.4]];
    for s in spaces() {
        let b = Branching::new(&s);
        for g in k_generators(&s) {
            let r = b.restrict(&k(&g)).unwrap();
            for seed in &seeds {
                let t = torus(&s, seed);
                let (lhs, rhs) = (t.eval(&k(&g)), t.eval(&r));
                assert!(close(lhs, rhs), "{} {g}: {lhs} vs {rhs} ({r})", s.code());
            }
        }
    }
}

#[test]
fn cayley_dimensions() {
    let s = SpacePreset::from_code("OH2").unwrap();
    let dims_m = |v: &VirtualRep| -> i64 {
        v.monomials()
            .map(|(mo, c)| {
                c * mo
                    .generators()
                    .map(|(g, e)| match g {
                        "forms:p=1" => 7i64.pow(e),
                        "forms:p=2" => 21i64.pow(e),
                        "spin7" => 8i64.pow(e),
                        _ => panic!("{g}"),
                    })
                    .product::<i64>()
            })
            .sum()
    };
    for (g, d) in [("l1", 9), ("l2", 36), ("s9", 16)] {
        assert_eq!(dims_m(&restrict(&k(g), &s).unwrap()), d, "{g}");
    }
    assert!(matches!(restrict(&k("l3"), &s), Err(Error::Capability(_))));
}

#[test]
fn quaternionic_restriction_counts_every_summand() {
    // Λ²ℂ⁴ of Sp(2) has dimension 6 = 4 + 1 + 1
    let s = SpacePreset::new(Family::QuaternionicH, 2).unwrap();
    assert_eq!(restrict(&k("l2"), &s).unwrap(), m("q*m1 + 2"));
    let s = SpacePreset::new(Family::QuaternionicH, 3).unwrap();
    assert_eq!(restrict(&k("l2"), &s).unwrap(), m("m2 + q*m1 + 1"));
}

#[test]
fn stated_examples() {
    let rh4 = SpacePreset::new(Family::RealH, 2).unwrap();
    let rh6 = SpacePreset::new(Family::RealH, 3).unwrap();
    assert_eq!(restrict(&k("l1"), &rh4).unwrap(), m("forms:p=1 + 1"));
    assert_eq!(restrict(&k("l2"), &rh6).unwrap(), m("forms:p=2 + forms:p=1"));
    for s in spaces() {
        assert_eq!(restrict(&k("l0"), &s).unwrap(), VirtualRep::one(Group::M));
        assert_eq!(admissible_lift(&MType::trivial(&s)).unwrap(), VirtualRep::one(Group::K));
    }
    assert_eq!(admissible_lift(&MType::forms(&rh6, 2).unwrap()).unwrap(), k("l2 - l1 + l0"));
    assert_eq!(admissible_lift(&MType::spinor(&rh6).unwrap()).unwrap(), k("s+"));
    let qh = SpacePreset::new(Family::QuaternionicH, 3).unwrap();
    assert_eq!(admissible_lift(&MType::quat_sigma1(&qh).unwrap()).unwrap(), k("p*l1 - l' - 1"));
    let ch3 = SpacePreset::new(Family::ComplexH, 3).unwrap();
    assert_eq!(restrict(&k("l2"), &ch3).unwrap(), m("z^-4 + m1"));
    assert_eq!(admissible_lift(&MType::complex_pq(&ch3, 1, 1).unwrap()).unwrap(), k("L1,1 - L0,1 - L1,0 + 1"));
}

#[test]
fn round_trip_over_catalog() {
    let mut all = spaces();
    all.push(SpacePreset::from_code("OH2").unwrap());
    for s in all {
        let b = Branching::new(&s);
        for sigma in MType::catalog(&s) {
            let lift = b.admissible_lift(&sigma).unwrap();
            assert_eq!(b.restrict(&lift).unwrap(), b.m_form(&sigma).unwrap(), "{} {}", s.code(), sigma.name());
        }
    }
}

#[test]
fn lifts_have_the_right_dimension() {
    for s in spaces() {
        let b = Branching::new(&s);
        let t = Torus { space: s.clone(), params: vec![1.0; torus(&s, &[1.0]).params.len()] };
        for sigma in MType::catalog(&s).into_iter().filter(|x| x.label.as_deref() != Some("k/2")) {
            let r = b.restrict(&b.admissible_lift(&sigma).unwrap()).unwrap();
            let d = sigma.dimension();
            assert!(close(t.eval(&r), d.to_string().parse::<f64>().unwrap()), "{} {}", s.code(), sigma.name());
        }
    }
}

#[test]
fn kernel_elements() {
    for mm in 1..=5 {
        let s = SpacePreset::new(Family::RealH, mm).unwrap();
        let mut taus = vec!["1".to_string(), "s+".into(), "s-*s-".into()];
        taus.extend((1..mm).map(|p| format!("l{p}")));
        if mm > 2 {
            taus.push("l1*l2^2".into());
        }
        for tau in taus {
            let g = k(&format!("s+*{tau}")).sub(&k(&format!("s-*{tau}")));
            assert!(!g.is_zero());
            assert!(restrict(&g, &s).unwrap().is_zero(), "{tau}");
        }
    }
}

#[test]
fn covers_and_errors() {
    let ch3 = SpacePreset::new(Family::ComplexH, 3).unwrap();
    let b2 = Branching::with_cover(&ch3, 2).unwrap();
    assert_eq!(b2.restrict(&k("w^2*l1")).unwrap(), m("z^2*m1 + z^2"));
    assert!(b2.restrict(&k("w^3")).is_err());
    assert!(Branching::with_cover(&ch3, 3).is_err());
    assert!(restrict(&k("l3"), &ch3).is_err());
    assert!(restrict(&k("L2,2"), &ch3).is_err());
    let ch2 = SpacePreset::new(Family::ComplexH, 2).unwrap();
    assert!(restrict(&k("K/2"), &ch2).is_err());
    assert_eq!(restrict(&k("K/2"), &ch3).unwrap(), m("k/2"));
    let rh4 = SpacePreset::new(Family::RealH, 2).unwrap();
    assert!(restrict(&k("w"), &rh4).is_err());
    assert!(restrict(&k("l2"), &rh4).is_err());
    let mu = MType::new(&rh4, MType::forms(&rh4, 1).unwrap().mu, MType::forms(&rh4, 1).unwrap().eps_alpha, None).unwrap();
    assert!(matches!(admissible_lift(&mu), Err(Error::Capability(_))));
}

#[test]
fn quaternionic_parity() {
    let s = SpacePreset::new(Family::QuaternionicH, 3).unwrap();
    let b = Branching::new(&s);
    assert_eq!(b.parity(&k("p*l1 - l' - 1")).unwrap(), Some(Parity::Even));
    assert_eq!(b.parity(&k("p + l1 + l3")).unwrap(), Some(Parity::Odd));
    assert_eq!(b.parity(&k("p + l2")).unwrap(), None);
    // restriction preserves parity
    for g in ["p*l1", "l2", "l3", "p*l2"] {
        let pk = b.parity(&k(g)).unwrap();
        assert_eq!(b.parity(&b.restrict(&k(g)).unwrap()).unwrap(), pk, "{g}");
    }
}

fn monomial_strategy(gens: Vec<String>) -> impl Strategy<Value = String> {
    prop::collection::vec(prop::sample::select(gens), 0..3).prop_map(|v| if v.is_empty() { "1".into() } else { v.join("*") })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn restriction_is_a_character_homomorphism(
        which in 0usize..12,
        terms in prop::collection::vec((-3i64..4, 0usize..64), 1..5),
        seed in prop::collection::vec(0.4f64..2.5, 5),
    ) {
        let s = spaces()[which].clone();
        let gens = k_generators(&s);
        let gamma = terms.iter().fold(VirtualRep::zero(Group::K), |acc, &(c, pick)| {
            let a = &gens[pick % gens.len()];
            let b = &gens[(pick / gens.len()) % gens.len()];
            let mono = if pick % 3 == 0 { "1".to_string() } else if pick % 3 == 1 { a.clone() } else { format!("{a}*{b}") };
            acc.add(&k(&mono).scale(c))
        });
        let r = restrict(&gamma, &s).unwrap();
        let t = torus(&s, &seed);
        prop_assert!(close(t.eval(&gamma), t.eval(&r)));
    }

    #[test]
    fn restriction_is_linear(
        a in -4i64..5, b in -4i64..5,
        (which, g1, g2) in (0usize..12).prop_flat_map(|w| {
            let gens = k_generators(&spaces()[w]);
            (Just(w), monomial_strategy(gens.clone()), monomial_strategy(gens))
        }),
    ) {
        let s = spaces()[which].clone();
        let (x, y) = (k(&g1), k(&g2));
        let lhs = restrict(&x.scale(a).add(&y.scale(b)), &s).unwrap();
        let rhs = restrict(&x, &s).unwrap().scale(a).add(&restrict(&y, &s).unwrap().scale(b));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn printed_form_parses_back(terms in prop::collection::vec((-5i64..6, prop::sample::select(vec!["l1", "l2", "s+", "s-", "L1,0", "w^-2", "l'"])), 0..6)) {
        let v = terms.iter().fold(VirtualRep::zero(Group::K), |acc, (c, g)| acc.add(&k(g).scale(*c)));
        if !v.is_zero() {
            prop_assert_eq!(VirtualRep::parse(Group::K, &v.to_string()).unwrap(), v);
        }
    }
}
