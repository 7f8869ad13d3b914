use ansatzkit::c2::{deg, growth_probe, register_coefficient, C2System, CoefficientRegistry};
use ansatzkit::closedform::closed_form_to_recurrence;
use ansatzkit::exact::{q, qpoly, ExpPoly, Nf, Poly, Rational, Ring};
use ansatzkit::format::text::{parse_operator, CoeffRegistry};
use ansatzkit::seq::expand_terms;
use ansatzkit::{Error, RecurrenceSystem};

fn sys(text: &str, init: &[i64]) -> RecurrenceSystem {
    let op = parse_operator(text, &CoeffRegistry::new(), None).unwrap();
    RecurrenceSystem::new(op, init.iter().map(|&x| q(x)).collect(), 0, 0).unwrap()
}

fn fib_registry() -> CoefficientRegistry {
    let reg = CoefficientRegistry::new();
    reg.register("F", &sys("N^2 - N - 1", &[0, 1])).unwrap();
    reg
}

#[test]
fn registered_fibonacci_is_binet() {
    let e = register_coefficient(&sys("N^2 - N - 1", &[0, 1])).unwrap();
    assert_eq!(e.term_count(), 2);
    assert_eq!(deg(&e), Some(0));
    let mut a = (0i64, 1i64);
    for n in 0..30 {
        assert_eq!(e.eval_rational(n), Some(q(a.0)));
        a = (a.1, a.0 + a.1);
    }
    assert!(e.bases().iter().all(|b| b
        .field()
        .is_some_and(|f| f.minpoly() == qpoly(&[-1, -1, 1]))));
}

#[test]
fn registered_powers() {
    let e = register_coefficient(&sys("N - 2", &[1])).unwrap();
    assert_eq!(e, ExpPoly::geometric(Nf::from_i64(2)));
    let e = register_coefficient(&sys("N^2 - 4*N + 4", &[1, 4])).unwrap();
    assert_eq!(
        e,
        ExpPoly::term(
            Nf::from_i64(2),
            Poly::new(vec![Nf::from_i64(1), Nf::from_i64(1)])
        )
    );
    assert_eq!(deg(&e), Some(1));
}

#[test]
fn degree_of_expressions() {
    let e = ExpPoly::from_poly(&qpoly(&[-1, 0, 1])).add(&ExpPoly::term(
        Nf::from_i64(3),
        Poly::new(vec![Nf::from_i64(0), Nf::from_i64(1)]),
    ));
    assert_eq!(deg(&e), Some(2));
    assert_eq!(deg(&ExpPoly::zero()), None);
}

#[test]
fn register_round_trip() {
    for (text, init) in [
        ("N^2 - N - 1", vec![0, 1]),
        ("N^2 - 4*N + 4", vec![1, 4]),
        ("N^3 - 3*N^2 + 3*N - 1", vec![2, 3, 5]),
    ] {
        let rs = sys(text, &init);
        let e = register_coefficient(&rs).unwrap();
        assert_eq!(closed_form_to_recurrence(&e).unwrap(), rs);
    }
}

#[test]
fn fibonacci_product_sequence() {
    let reg = fib_registry();
    let c2 = C2System::parse("N - F(n+2)", &[q(1)], &reg).unwrap();
    assert_eq!(c2.degree, 0);
    assert!(c2.coefficients.contains_key("F"));
    let a = expand_terms(&c2.system, 32).unwrap().terms;
    let head: Vec<Rational> = [1, 1, 2, 6, 30, 240, 3120, 65520]
        .iter()
        .map(|&x| q(x))
        .collect();
    assert_eq!(a[..8], head[..]);
    for n in 0..=28 {
        let v = &a[n] * &a[n + 1] * &a[n + 3]
            - &a[n] * &a[n + 2] * &a[n + 2]
            - &a[n + 2] * &a[n + 1] * &a[n + 1];
        assert_eq!(v, q(0), "n = {n}");
    }
}

#[test]
fn unknown_coefficient_rejected() {
    let reg = fib_registry();
    assert!(matches!(
        C2System::parse("N - G(n)", &[q(1)], &reg),
        Err(Error::UnknownCoefficient(_))
    ));
}

#[test]
fn growth_of_quadratic_exponent_sequences() {
    let reg = fib_registry();
    let c2 = C2System::parse("N - F(n+2)", &[q(1)], &reg).unwrap();
    let rep = growth_probe(&c2.system, 60).unwrap();
    let a = expand_terms(&c2.system, 61).unwrap().terms;
    for (n, x) in a.iter().enumerate().skip(40) {
        let ratio = ansatzkit::exact::rational::ln_abs(x) / (n * n) as f64;
        assert!(ratio > 0.1 && ratio < 0.4, "{ratio}");
    }
    let half_log_phi = ((1.0 + 5f64.sqrt()) / 2.0).ln() / 2.0;
    assert!((rep.quadratic - half_log_phi).abs() < 0.01, "{rep:?}");

    let two = C2System::parse("N - 2^n", &[q(1)], &CoefficientRegistry::new()).unwrap();
    let rep = growth_probe(&two.system, 60).unwrap();
    assert!((rep.quadratic - 2f64.ln() / 2.0).abs() < 1e-9, "{rep:?}");
    assert!(rep.residual < 1e-6);

    let rep = growth_probe(&sys("N^2 - N - 1", &[0, 1]), 60).unwrap();
    assert!(rep.quadratic.abs() < 1e-6, "{rep:?}");
}

#[test]
fn zero_tail_reported() {
    let rs = RecurrenceSystem::new(
        parse_operator("N - 1", &CoeffRegistry::new(), None).unwrap(),
        vec![q(0)],
        0,
        0,
    )
    .unwrap();
    assert_eq!(growth_probe(&rs, 30), Err(Error::ZeroTail));
}

#[test]
fn registry_is_shared_across_threads() {
    let reg = std::sync::Arc::new(fib_registry());
    let handles: Vec<_> = (0..4)
        .map(|i| {
            let reg = reg.clone();
            std::thread::spawn(move || {
                reg.register(&format!("P{i}"), &sys("N - 2", &[1])).unwrap();
                reg.get("F").unwrap().closed_form
            })
        })
        .collect();
    let forms: Vec<ExpPoly> = handles.into_iter().map(|h| h.join().unwrap()).collect();
    assert!(forms.windows(2).all(|w| w[0] == w[1]));
    assert_eq!(reg.closed_forms().len(), 5);
}
