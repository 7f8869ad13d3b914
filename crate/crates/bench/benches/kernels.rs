use ansatzkit::asymptotics::{bt_leading, bt_refine};
use ansatzkit::closedform::cfinite_closed_form;
use ansatzkit::closure::{combine, parse_claim, prove_identity, ClosureKind, IdentityClaim};
use ansatzkit::genfun::{genfun_cfinite, holonomic_to_diff};
use ansatzkit::guess::{guess_cfinite, guess_holonomic, GuessOptions};
use ansatzkit_bench::*;
use criterion::{black_box, criterion_group, criterion_main, Criterion};

fn guessing(c: &mut Criterion) {
    let fib = terms(&fibonacci(), 40);
    let cat = terms(&catalan(), 40);
    let opts = GuessOptions::default();
    c.bench_function("guess cfinite fibonacci", |b| {
        b.iter(|| guess_cfinite(black_box(&fib), 6, &opts).unwrap())
    });
    c.bench_function("guess holonomic catalan", |b| {
        b.iter(|| guess_holonomic(black_box(&cat), 2, 2, &opts).unwrap())
    });
}

fn conversions(c: &mut Criterion) {
    let floor = floor_squares();
    let cat = catalan();
    c.bench_function("genfun cfinite floor", |b| {
        b.iter(|| genfun_cfinite(black_box(&floor)).unwrap())
    });
    c.bench_function("closed form floor", |b| {
        b.iter(|| cfinite_closed_form(black_box(&floor)).unwrap())
    });
    c.bench_function("diff equation catalan", |b| {
        b.iter(|| holonomic_to_diff(black_box(&cat)).unwrap())
    });
}

fn closures(c: &mut Criterion) {
    let (cat, fac) = (catalan(), factorial());
    let (a, e) = (system("N - (2^n + 1)", &[1]), system("N - 3*(-1)^n", &[1]));
    c.bench_function("closure holonomic add", |b| {
        b.iter(|| combine(ClosureKind::Add, &cat, Some(&fac)).unwrap())
    });
    c.bench_function("closure holonomic cauchy", |b| {
        b.iter(|| combine(ClosureKind::Cauchy, &cat, Some(&fac)).unwrap())
    });
    c.bench_function("closure c2 termwise", |b| {
        b.iter(|| combine(ClosureKind::TermWise, &a, Some(&e)).unwrap())
    });
}

fn proving(c: &mut Criterion) {
    let reg = floor_registry();
    let claim = IdentityClaim::new(parse_claim(FLOOR_IDENTITY).unwrap(), 0);
    let mut g = c.benchmark_group("prover");
    g.sample_size(10);
    g.bench_function("floor identity", |b| {
        b.iter(|| prove_identity(black_box(&claim), &reg).unwrap())
    });
    g.finish();
}

fn asymptotics(c: &mut Criterion) {
    let op = factorial().operator;
    c.bench_function("asymptotics factorial 4 terms", |b| {
        b.iter(|| {
            let f = bt_leading(black_box(&op)).unwrap().remove(0);
            bt_refine(&f, &op, 4).unwrap()
        })
    });
}

criterion_group!(
    kernels,
    guessing,
    conversions,
    closures,
    proving,
    asymptotics
);
criterion_main!(kernels);
