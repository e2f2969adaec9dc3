//! parse(emit(x)) = x for every file schema.

use proptest::prelude::*;
use zetascope::config::{ConfigFile, Format, Grid, RunConfig};
use zetascope::io::*;
use zetascope_core::geodesics::{GeodesicClass, Holonomy, LengthSpectrum};
use zetascope_core::mtype::MType;
use zetascope_core::rational::{format_q, parse_q, Q};
use zetascope_core::space::SpacePreset;
use zetascope_core::zeta::{Divisor, DivisorPoint, Provenance, SpectralDatum, SpectralEntry};
use zetascope_core::C64;

fn finite() -> impl Strategy<Value = f64> {
    prop_oneof![-1e6f64..1e6, -1.0f64..1.0, (1u32..2000).prop_map(|k| 1.0 / k as f64)]
}

fn rational() -> impl Strategy<Value = Q> {
    (-500i64..500, 1i64..60).prop_map(|(a, b)| Q::new(a.into(), b.into()))
}

fn class(space: &SpacePreset) -> impl Strategy<Value = GeodesicClass> {
    let s = space.clone();
    let width = Holonomy::identity(space).alpha.len();
    (0.1f64..20.0, 1u32..4, prop::option::of(prop::collection::vec(-3.0f64..3.0, width)), prop::option::of(-5.0f64..5.0))
        .prop_map(move |(l, n, hol, tr)| {
            let h = hol.map(|alpha| Holonomy { alpha, two_alpha: Holonomy::identity(&s).two_alpha });
            GeodesicClass::new(&s, l, n, h, if n == 1 { tr } else { None }).unwrap()
        })
}

fn spectrum() -> impl Strategy<Value = LengthSpectrum> {
    prop::sample::select(vec!["RH2", "RH4", "CH2"]).prop_flat_map(|code| {
        let s = SpacePreset::from_code(code).unwrap();
        let topology = prop_oneof![Just((None, None)), (0.5f64..100.0).prop_map(|v| (Some(v), None)), (-8i64..8).prop_map(|c| (None, Some(c)))];
        (prop::collection::vec(class(&s), 0..8), topology).prop_map(
            move |(classes, (vol, chi))| {
                let cutoff = classes.iter().map(|c| c.length).fold(1.0, f64::max);
                LengthSpectrum::new(s.clone(), classes, cutoff, vol, chi).unwrap()
            },
        )
    })
}

proptest! {
    #[test]
    fn floats_survive_json(xs in prop::collection::vec(finite(), 0..20)) {
        let back: Vec<f64> = from_json(&to_json(&xs).unwrap()).unwrap();
        prop_assert_eq!(back, xs);
    }

    #[test]
    fn rationals_survive_text(x in rational()) {
        prop_assert_eq!(parse_q(&format_q(&x)).unwrap(), x);
    }

    #[test]
    fn length_spectra(sp in spectrum()) {
        let text = to_json(&LengthSpectrumDoc::new(&sp, None)).unwrap();
        let doc: LengthSpectrumDoc = from_json(&text).unwrap();
        prop_assert_eq!(doc.to_spectrum().unwrap(), sp);
        // emitting again is byte-identical
        prop_assert_eq!(to_json(&doc).unwrap(), text);
    }

    #[test]
    fn spectral_data(entries in prop::collection::vec((finite(), any::<bool>(), 1i64..9), 0..10)) {
        let lambda = |x: f64, imaginary: bool| if imaginary && x != 0.0 { C64::new(0.0, x.abs()) } else { C64::new(x.abs(), 0.0) };
        let d = SpectralDatum::new(entries.iter().map(|&(x, i, mult)| SpectralEntry { lambda: lambda(x, i), mult }).collect()).unwrap();
        let doc: SpectralDoc = from_json(&to_json(&SpectralDoc::new(&d)).unwrap()).unwrap();
        prop_assert_eq!(doc.to_datum().unwrap(), d);
    }

    #[test]
    fn divisors(pts in prop::collection::vec((-40i32..40, -5i32..5, -9i64..10, 0usize..3), 0..20)) {
        let prov = [Provenance::Spectral, Provenance::DualTopological, Provenance::Combined];
        let d = Divisor::merged(pts.iter().map(|&(x, y, o, p)| DivisorPoint {
            location: C64::new(x as f64 / 4.0, y as f64 / 3.0),
            order: o,
            provenance: prov[p],
        }).collect());
        let doc = divisor_doc(&d);
        for w in doc.windows(2) {
            prop_assert!((w[0].re, w[0].im) < (w[1].re, w[1].im));
        }
        let back: Vec<PointDoc> = from_json(&to_json(&doc).unwrap()).unwrap();
        prop_assert_eq!(divisor_doc(&divisor_from_doc(&back)), doc);
    }

    #[test]
    fn grid_csv_rows(rows in prop::collection::vec((finite(), finite(), finite(), any::<bool>()), 1..12), complex in any::<bool>()) {
        let rows: Vec<GridRow> = rows.iter().enumerate().map(|(k, &(t, re, im, flag))| GridRow {
            t: Cx { re: t, im: if complex && k == 0 { 1.0 } else { 0.0 } },
            value: Cx { re, im },
            flag,
        }).collect();
        let text = grid_csv(&rows).unwrap();
        let header = if complex { "t_re,t_im,Re,Im,flag\n" } else { "t,Re,Im,flag\n" };
        prop_assert!(text.starts_with(header));
        prop_assert_eq!(parse_grid_csv(&text).unwrap(), rows);
    }

    #[test]
    fn configs(space in prop::option::of(prop::sample::select(vec!["RH2", "CH3"])),
               a in -5.0f64..5.0, span in 0.01f64..5.0, steps in 1usize..500,
               tol in prop::option::of(1e-14f64..1e-2), seed in prop::option::of(any::<u64>()), csv in any::<bool>()) {
        let file = ConfigFile {
            space: space.map(String::from),
            grid: Some(format!("{a}:{}:{steps}", a + span).parse().unwrap()),
            tol,
            seed,
            format: Some(if csv { Format::Csv } else { Format::Json }),
            ..Default::default()
        };
        let text = to_json(&file).unwrap();
        prop_assert_eq!(&from_json::<ConfigFile>(&text).unwrap(), &file);
        let cfg = RunConfig::merge(&Default::default(), file).unwrap();
        let back: RunConfig = from_json(&to_json(&cfg).unwrap()).unwrap();
        prop_assert_eq!(back, cfg);
    }
}

#[test]
fn sigma_documents_rebuild_the_mtype() {
    for code in ["RH2", "RH6", "CH3", "QH2", "OH2"] {
        let s = SpacePreset::from_code(code).unwrap();
        for sigma in MType::catalog(&s) {
            let doc: SigmaDoc = from_json(&to_json(&SigmaDoc::new(&sigma)).unwrap()).unwrap();
            assert_eq!(doc.to_mtype(&s).unwrap(), sigma);
            SigmaReport::new(&sigma).unwrap();
        }
    }
}

#[test]
fn rationals_accept_exact_numbers() {
    let doc: SigmaDoc = from_json(r#"{"mu_sigma": [0.5, 1, "-3/4"], "eps_alpha": "1/2"}"#).unwrap();
    assert_eq!(doc.mu_sigma.iter().map(format_q).collect::<Vec<_>>(), ["1/2", "1", "-3/4"]);
}

#[test]
fn malformed_files_are_input_errors() {
    for bad in ["{", r#"{"space": "RH2"}"#, r#"{"space": "ZZ", "cutoff_L": 1, "classes": []}"#] {
        let r = from_json::<LengthSpectrumDoc>(bad).and_then(|d| d.to_spectrum());
        assert_eq!(r.unwrap_err().exit_code(), 2, "{bad}");
    }
    let neg = r#"{"space": "RH2", "cutoff_L": 4, "classes": [{"length": -1, "n_gamma": 1}]}"#;
    assert_eq!(from_json::<LengthSpectrumDoc>(neg).unwrap().to_spectrum().unwrap_err().exit_code(), 2);
}

#[test]
fn grid_strings_round_trip() {
    for g in ["0.5:3:100", "0:1:3,-1:1:2", "-2.25:7:1"] {
        let grid: Grid = g.parse().unwrap();
        assert_eq!(grid.to_string().parse::<Grid>().unwrap(), grid);
    }
}
