use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use stabcert::avi::enumerate_face_pairs;
use stabcert::geometry::Cone;
use stabcert::lcp::{check_lipschitz_domain, is_q0, modulus, solve_lcp, ModulusOptions, Q0Status};
use stabcert::linalg::{rat, zeros};
use stabcert_bench::{example, tridiagonal};

fn geometry(c: &mut Criterion) {
    let mut g = c.benchmark_group("geometry");
    for n in [3, 4, 5] {
        g.bench_with_input(BenchmarkId::new("face_pairs_orthant", n), &n, |b, &n| {
            let k = Cone::orthant(n);
            b.iter(|| enumerate_face_pairs(&k))
        });
        g.bench_with_input(BenchmarkId::new("polar_of_domain", n), &n, |b, &n| {
            let d = stabcert::lcp::domain_cone(&tridiagonal(n));
            b.iter(|| Cone::from_h(n, d.equalities(), d.inequalities()).polar())
        });
    }
    g.finish();
}

fn lcp(c: &mut Criterion) {
    let mut g = c.benchmark_group("lcp");
    for n in [4, 6, 8] {
        let m = tridiagonal(n);
        let q: Vec<_> = (0..n).map(|i| rat(if i % 2 == 0 { -1 } else { 1 })).collect();
        g.bench_with_input(BenchmarkId::new("solve_tridiagonal", n), &n, |b, _| b.iter(|| solve_lcp(&m, &q).unwrap()));
    }
    for n in [2, 3, 4] {
        let m = tridiagonal(n);
        let o = zeros(n);
        g.bench_with_input(BenchmarkId::new("certify_origin", n), &n, |b, _| {
            b.iter(|| check_lipschitz_domain(&m, &o, &o, &Q0Status::CertifiedYesOnRays).unwrap())
        });
        let cert = check_lipschitz_domain(&m, &o, &o, &Q0Status::CertifiedYesOnRays).unwrap();
        let opts = ModulusOptions { starts: 16, ..ModulusOptions::default() };
        g.bench_with_input(BenchmarkId::new("modulus_origin", n), &n, |b, _| {
            b.iter(|| modulus(&m, &o, &o, &cert, &opts).unwrap())
        });
    }
    g.bench_function("q0_example", |b| b.iter(|| is_q0(&example(), 1000, 0).unwrap()));
    g.finish();
}

criterion_group!(benches, geometry, lcp);
criterion_main!(benches);
