use std::sync::OnceLock;

use proptest::prelude::*;

use tremor_core::catalog::builtin_catalog;
use tremor_core::dimensions::{log10_ratio, rat};
use tremor_core::estimator::{alpha_direct, keplerian_check, tremor_chain, Env, ForceLaw};
use tremor_core::literal::{parse_quantity, parse_unit_expr, render_quantity};
use tremor_core::solver::{monomial_dim, solve, MonomialProblem, SolveError};
use tremor_core::{DimVec, Error, Quantity, Rational, Registry, SystemSpec, ValueSet};

const COUNTS: [f64; 5] = [1.0, 1e6, 1e12, 1e24, 1e78];

fn registry() -> &'static Registry {
    static REG: OnceLock<Registry> = OnceLock::new();
    REG.get_or_init(Registry::builtin)
}

fn catalog() -> &'static [SystemSpec] {
    static CAT: OnceLock<Vec<SystemSpec>> = OnceLock::new();
    CAT.get_or_init(|| builtin_catalog(registry()).unwrap())
}

fn env_for<'a>(spec: &SystemSpec, set: ValueSet) -> Env<'a> {
    let consts = registry().set(set);
    let mut env = Env::new(consts);
    for (name, src) in &spec.params {
        env = env.with(name.clone(), src.resolve(&consts).unwrap());
    }
    env
}

fn force_entries() -> impl Iterator<Item = &'static SystemSpec> {
    catalog().iter().filter(|s| s.force_law.is_some())
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

fn dim_vec() -> impl Strategy<Value = DimVec> {
    [small_rational(), small_rational(), small_rational(), small_rational()].prop_map(DimVec::from_exponents)
}

fn int_dim() -> impl Strategy<Value = DimVec> {
    [-2i64..=2, -2i64..=2, -2i64..=2, -1i64..=1].prop_map(|e| DimVec::from_exponents(e.map(Rational::from_integer)))
}

/// Exponents `k/4` with `|k| <= 12`.
fn grid() -> Vec<Rational> {
    (-12..=12).map(|k| rat(k, 4)).collect()
}

/// Independent dimension oracle: sums exponents over integer numerators on a
/// common denominator, without touching `DimVec` arithmetic.
fn oracle_dim(parts: &[(DimVec, Rational)]) -> [Rational; 4] {
    let mut out = [(0i64, 1i64); 4];
    for (d, p) in parts {
        for (slot, e) in out.iter_mut().zip(d.exponents()) {
            let prod = (e.numer() * p.numer(), e.denom() * p.denom());
            *slot = (slot.0 * prod.1 + prod.0 * slot.1, slot.1 * prod.1);
        }
    }
    out.map(|(n, d)| Rational::new(n, d))
}

fn brute_force(gens: &[(String, DimVec)], target: DimVec) -> Vec<Vec<Rational>> {
    let g = grid();
    let mut found = Vec::new();
    let mut idx = vec![0usize; gens.len()];
    loop {
        let exps: Vec<(String, Rational)> = gens.iter().zip(&idx).map(|((n, _), &i)| (n.clone(), g[i])).collect();
        if monomial_dim(gens, &exps) == target {
            found.push(exps.into_iter().map(|(_, e)| e).collect());
        }
        let mut k = 0;
        loop {
            if k == idx.len() {
                return found;
            }
            idx[k] += 1;
            if idx[k] < g.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn solver_matches_brute_force(
        dims in prop::collection::vec(int_dim(), 1..=3),
        planted in prop::collection::vec(0usize..25, 3),
        use_planted in any::<bool>(),
        free_target in int_dim(),
    ) {
        let gens: Vec<(String, DimVec)> = dims.iter().enumerate().map(|(i, d)| (format!("g{i}"), *d)).collect();
        let g = grid();
        let target = if use_planted {
            let exps: Vec<(String, Rational)> = gens.iter().zip(&planted).map(|((n, _), &i)| (n.clone(), g[i])).collect();
            monomial_dim(&gens, &exps)
        } else {
            free_target
        };
        let brute = brute_force(&gens, target);
        match solve(&MonomialProblem::new(gens.clone(), vec![], target)) {
            Ok(sol) => {
                let exps: Vec<Rational> = sol.exponents.iter().map(|(_, e)| *e).collect();
                prop_assert_eq!(monomial_dim(&gens, &sol.exponents), target);
                if exps.iter().all(|e| g.contains(e)) {
                    prop_assert_eq!(brute, vec![exps]);
                } else {
                    prop_assert!(brute.is_empty());
                }
            }
            Err(SolveError::Inconsistent { .. }) => prop_assert!(brute.is_empty()),
            Err(SolveError::Underdetermined { particular, nullspace }) => {
                prop_assert!(!nullspace.is_empty());
                for v in &nullspace {
                    prop_assert_eq!(monomial_dim(&gens, v), DimVec::DIMENSIONLESS);
                }
                if let Some(p) = particular {
                    prop_assert_eq!(monomial_dim(&gens, &p), target);
                }
                if use_planted {
                    prop_assert!(!brute.is_empty());
                }
            }
            Err(e) => prop_assert!(false, "unexpected {e:?}"),
        }
    }

    #[test]
    fn dimension_fuzz_never_coerces(
        parts in prop::collection::vec((dim_vec(), small_rational()), 0..5),
        q in small_rational(),
    ) {
        let mut expected = oracle_dim(&parts);
        expected[1] += q;
        let names: Vec<String> = (0..parts.len()).map(|i| format!("x{i}")).collect();
        let constants = names.iter().cloned().zip(parts.iter().map(|(_, p)| *p)).collect();
        let lookup = |name: &str| -> tremor_core::Result<DimVec> {
            let i = names.iter().position(|n| n == name).unwrap();
            Ok(parts[i].0)
        };
        let result = ForceLaw::new(constants, q, lookup);
        if DimVec::from_exponents(expected) == DimVec::FORCE {
            prop_assert!(result.is_ok());
        } else {
            let is_mismatch = matches!(result, Err(Error::DimensionMismatch { .. }));
            prop_assert!(is_mismatch);
        }
    }

    #[test]
    fn mismatched_ratios_raise(a in dim_vec(), b in dim_vec(), x in -50.0f64..50.0, y in -50.0f64..50.0) {
        let qa = Quantity::from_log10(x, a);
        let qb = Quantity::from_log10(y, b);
        match log10_ratio(&qa, &qb) {
            Ok(d) => {
                prop_assert_eq!(a, b);
                prop_assert!((d - (x - y)).abs() < 1e-9);
            }
            Err(Error::DimensionMismatch { .. }) => {
                prop_assert_ne!(a, b);
                prop_assert!(qa.ensure_dim(b, "fuzz").is_err());
            }
            Err(e) => prop_assert!(false, "unexpected {e:?}"),
        }
    }

    #[test]
    fn gamma_family_closes(gamma in -6i64..=6) {
        let g = |n: &str, d: DimVec| (n.to_string(), d);
        let gens = vec![
            g("e2", DimVec::CHARGE.pow(rat(2, 1))),
            g("m", DimVec::MASS),
            g("R", DimVec::LENGTH),
            g("c", DimVec::VELOCITY),
        ];
        let sol = solve(&MonomialProblem::new(gens, vec![("c".into(), rat(-gamma, 1))], DimVec::FORCE)).unwrap();
        prop_assert_eq!(sol.exponent("e2"), Some(rat(gamma + 2, 2)));
        prop_assert_eq!(sol.exponent("m"), Some(rat(-gamma, 2)));
        prop_assert_eq!(sol.exponent("R"), Some(rat(-(gamma + 4), 2)));
        let law = ForceLaw::from_solution(&sol, "R");
        let r = law.action_exponents().into_iter().find(|(n, _)| n == "R").map(|(_, e)| e);
        prop_assert_eq!(r, Some(rat(2 - gamma, 4)));
    }

    #[test]
    fn tremor_chain_scaling(lm in -31.0f64..-20.0, lr in -16.0f64..31.0, ln in 0.0f64..80.0) {
        let consts = registry().set(ValueSet::Paper);
        let env = Env::new(consts).with("k", Quantity::from_log10(5.2, DimVec::FORCE));
        let m = Quantity::from_log10(lm, DimVec::MASS);
        let r = Quantity::from_log10(lr, DimVec::LENGTH);
        let n = 10f64.powf(ln);
        for law in [ForceLaw::gravity(), ForceLaw::coulomb(), ForceLaw::string()] {
            let b = tremor_chain(m, r, &law, n, &env).unwrap();
            let direct = alpha_direct(m, r, &law, &env).unwrap();
            prop_assert!((b.action_alpha.log10 - direct.log10).abs() <= 1e-9);
            let via_total = b.total_action_a.log10 - 1.5 * n.log10();
            prop_assert!((b.action_alpha.log10 - via_total).abs() <= 1e-9);
            prop_assert!(keplerian_check(&b).abs() <= 1e-9);
            // log-slope in R equals the action exponent
            let r2 = Quantity::from_log10(lr + 1.0, DimVec::LENGTH);
            let slope = alpha_direct(m, r2, &law, &env).unwrap().log10 - direct.log10;
            let expected = law.action_exponents().into_iter().find(|(k, _)| k == "R").map(|(_, e)| e).unwrap();
            prop_assert!((slope - *expected.numer() as f64 / *expected.denom() as f64).abs() <= 1e-9);
        }
    }
}

fn unit_dim() -> impl Strategy<Value = DimVec> {
    [small_rational(), small_rational(), small_rational(), small_rational()].prop_map(DimVec::from_exponents)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn literal_round_trip(sig in 1.0f64..10.0, decade in -300i64..300, dim in unit_dim()) {
        let q = Quantity::from_log10(sig.log10() + decade as f64, dim);
        let text = render_quantity(&q);
        let back = parse_quantity(&text).unwrap();
        prop_assert_eq!(back.dim, dim);
        prop_assert!((back.log10 - q.log10).abs() <= 1e-12, "{} -> {}", text, back.log10);
        prop_assert_eq!(parse_unit_expr(&dim.unit_string()).unwrap(), dim);
    }
}

#[test]
fn alpha_is_independent_of_count_for_catalog_laws() {
    for set in ValueSet::ALL {
        let consts = registry().set(set);
        for spec in force_entries() {
            let env = env_for(spec, set);
            let law = spec.force_law.as_ref().unwrap();
            let m = spec.constituent_mass.as_ref().unwrap().resolve(&consts).unwrap();
            let r = spec.radius.as_ref().unwrap().resolve(&consts).unwrap();
            let direct = alpha_direct(m, r, law, &env).unwrap();
            for n in COUNTS {
                let b = tremor_chain(m, r, law, n, &env).unwrap();
                assert!((b.action_alpha.log10 - direct.log10).abs() <= 1e-9, "{} N={n}", spec.id);
                let identity = b.total_action_a.log10 - 1.5 * n.log10();
                assert!((b.action_alpha.log10 - identity).abs() <= 1e-9, "{}", spec.id);
                assert!(keplerian_check(&b).abs() <= 1e-9, "{}", spec.id);
            }
        }
    }
}

#[test]
fn heavier_constituents_never_lower_alpha() {
    let consts = registry().set(ValueSet::Paper);
    for spec in force_entries() {
        let env = env_for(spec, ValueSet::Paper);
        let law = spec.force_law.as_ref().unwrap();
        let m = spec.constituent_mass.as_ref().unwrap().resolve(&consts).unwrap();
        let r = spec.radius.as_ref().unwrap().resolve(&consts).unwrap();
        let heavier = Quantity::from_log10(m.log10 + 1.0, DimVec::MASS);
        let a = alpha_direct(m, r, law, &env).unwrap();
        let b = alpha_direct(heavier, r, law, &env).unwrap();
        let m_exp = law
            .action_exponents()
            .into_iter()
            .find(|(k, _)| k == "m")
            .map(|(_, e)| e)
            .unwrap();
        let slope = *m_exp.numer() as f64 / *m_exp.denom() as f64;
        assert!((b.log10 - a.log10 - slope).abs() <= 1e-9, "{}", spec.id);
        if slope >= 0.0 {
            assert!(b.log10 >= a.log10 - 1e-12, "{}", spec.id);
        }
    }
}
