use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use proptest::prelude::*;

use hilbzeta::curve::PlaneCurve;
use hilbzeta::document::CurveDocument;
use hilbzeta::field::{shared_field, Elem};
use hilbzeta::series::{check_functional_equation, zeta_from_counts};
use hilbzeta::zeta::{assemble, verify_local_theorem, verify_weil, BranchData, DirectCounter, ZetaConfig};
use hilbzeta::Error;

fn corpus() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn load(name: &str) -> PlaneCurve {
    let doc = CurveDocument::load(&corpus().join(format!("{name}.json"))).unwrap();
    PlaneCurve::from_document(&doc).unwrap()
}

#[test]
fn smooth_curves_reduce_to_the_weil_zeta() {
    for name in ["line_f3", "conic_f5", "elliptic_f3", "elliptic_f5"] {
        let curve = load(name);
        let config = ZetaConfig::default();
        let asm = assemble(&curve, &DirectCounter::default(), &config).unwrap();
        assert!(asm.locus.points.is_empty());
        let counts: Vec<i64> = asm.counts.iter().map(|&n| n as i64).collect();
        assert_eq!(asm.zeta, zeta_from_counts(&counts, asm.precision).unwrap(), "{name}");
    }
}

/// For a rational cubic with a single singular point the global numerator
/// is the local one, read in `t^e` when the point has residue degree `e`.
#[test]
fn rational_cubics_match_their_local_numerator() {
    let cases = [
        ("cuspidal_cubic_f5", "y^2 - x^3", BranchData::Rational(1)),
        ("nodal_cubic_split_f5", "y^2 - x^2", BranchData::Rational(2)),
        (
            "nodal_cubic_nonsplit_f3",
            "y^2 + x^2",
            BranchData::OrbitDegrees(vec![2]),
        ),
    ];
    for (name, local, branches) in cases {
        let curve = load(name);
        let global = verify_weil(&curve, &DirectCounter::default(), &ZetaConfig::default()).unwrap();
        let field = curve.field().clone();
        let f = hilbzeta::bipoly::BiPoly::parse(&field, local).unwrap();
        let rep = verify_local_theorem(&f, &field, &branches, 6, Some(1), Default::default()).unwrap();
        assert_eq!(global.numerator.as_i64().unwrap(), rep.numerator_i64(), "{name}");
    }
}

#[test]
fn coordinate_changes_do_not_move_the_answer() {
    for name in ["cuspidal_cubic_f7", "nodal_cubic_nonsplit_f3", "nodal_quartic_f3"] {
        let curve = load(name);
        let base = verify_weil(&curve, &DirectCounter::default(), &ZetaConfig::default()).unwrap();
        for perm in [[1, 2, 0], [2, 0, 1], [0, 2, 1]] {
            let moved = curve.permuted(perm);
            let r = verify_weil(&moved, &DirectCounter::default(), &ZetaConfig::default()).unwrap();
            assert_eq!(r.numerator, base.numerator, "{name} under {perm:?}");
            assert_eq!(r.zeta, base.zeta);
        }
    }
}

#[test]
fn precision_only_extends_the_series() {
    let curve = load("nodal_cubic_split_f5");
    let short = verify_weil(&curve, &DirectCounter::default(), &ZetaConfig::default()).unwrap();
    let long_config = ZetaConfig {
        min_precision: short.precision + 6,
        ..ZetaConfig::default()
    };
    let long = verify_weil(&curve, &DirectCounter::default(), &long_config).unwrap();
    assert_eq!(long.numerator, short.numerator);
    assert_eq!(long.zeta.truncate(short.precision), short.zeta);
}

const CUBIC_MONOMIALS: [[u32; 3]; 10] = [
    [3, 0, 0],
    [0, 3, 0],
    [0, 0, 3],
    [2, 1, 0],
    [2, 0, 1],
    [1, 2, 0],
    [0, 2, 1],
    [1, 0, 2],
    [0, 1, 2],
    [1, 1, 1],
];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    /// Any integral plane cubic over F3 or F5 gets a degree-2 numerator
    /// with the functional equation, whatever its singularities.
    #[test]
    fn random_cubics(p in prop::sample::select(vec![3u32, 5]), coeffs in prop::collection::vec(0u64..5, 10)) {
        let field = shared_field(p, 1).unwrap();
        let terms: Vec<([u32; 3], Elem)> = CUBIC_MONOMIALS
            .iter()
            .zip(&coeffs)
            .filter(|(_, &c)| c % p as u64 != 0)
            .map(|(&exps, &c)| (exps, Elem(c % p as u64)))
            .collect();
        let curve = match PlaneCurve::new("random", field, terms, Default::default()) {
            Ok(c) => c,
            _ => return Ok(()),
        };
        match verify_weil(&curve, &DirectCounter::default(), &ZetaConfig::default()) {
            Ok(r) => {
                prop_assert!(r.passed(), "{curve}: {:?} {:?}", r.verdicts, r.notes);
                prop_assert_eq!(r.numerator.degree(), Some(2));
                prop_assert_eq!(r.numerator.coeff(2), BigInt::from(p));
                prop_assert!(check_functional_equation(&r.numerator).holds);
                prop_assert_eq!(r.zeta.coeff(1), &BigInt::from(r.counts["1"]).into());
            }
            Err(Error::NotIntegral(_)) | Err(Error::InvalidCurve(_)) => {}
            Err(e) => prop_assert!(false, "{curve}: {e}"),
        }
    }
}
