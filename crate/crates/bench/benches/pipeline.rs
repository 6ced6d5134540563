use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use reduce_core::geometry::{Scenario, ScenarioId};
use reduce_core::lie::{haar_quadrature_for, GroupId, Representation};
use reduce_core::reduce::{assemble, BoundaryCondition, GridConfig};
use reduce_core::spectral::{eigen_spectrum_with, Method};

fn assembly(c: &mut Criterion) {
    let mut g = c.benchmark_group("assemble");
    for (id, label, n) in [
        (ScenarioId::Su2Conj, "trivial", 4000),
        (ScenarioId::So3Space, "spin:2", 4000),
        (ScenarioId::Su3Conj, "adjoint", 24),
    ] {
        let s = Scenario::catalog(id);
        let rep = Representation::parse(s.group, label).unwrap();
        let grid = GridConfig::default_for(&s, n);
        g.bench_function(BenchmarkId::new(id.as_str(), format!("{label}/N{n}")), |b| {
            b.iter(|| assemble(black_box(&s), &rep, &grid, BoundaryCondition::Dirichlet).unwrap())
        });
    }
    g.finish();
}

fn eigensolve(c: &mut Criterion) {
    let mut g = c.benchmark_group("eigen");
    g.sample_size(10);
    let s = Scenario::catalog(ScenarioId::Su2Conj);
    let rep = Representation::parse(s.group, "trivial").unwrap();
    for (n, method) in [
        (1000, Method::Tridiagonal),
        (4000, Method::Tridiagonal),
        (4000, Method::ShiftInvertLanczos),
        (16000, Method::ShiftInvertLanczos),
    ] {
        let op = assemble(&s, &rep, &GridConfig::default_for(&s, n), BoundaryCondition::Dirichlet).unwrap();
        g.bench_function(BenchmarkId::new(format!("{method:?}"), n), |b| {
            b.iter(|| eigen_spectrum_with(black_box(&op), 6, method).unwrap())
        });
    }
    g.finish();
}

fn haar_average(c: &mut Criterion) {
    let mut g = c.benchmark_group("haar");
    for (group, order, label) in [(GroupId::Su2, 6, "spin:1"), (GroupId::So3, 6, "spin:2"), (GroupId::Su3, 1, "adjoint")] {
        let quad = haar_quadrature_for(group, order).unwrap();
        let rep = Representation::parse(group, label).unwrap();
        g.bench_function(BenchmarkId::new(group.as_str(), format!("{label}/order{order}/{}nodes", quad.len())), |b| {
            b.iter(|| quad.integrate(|h| rep.character(h).norm_sqr().into()))
        });
    }
    g.finish();
}

criterion_group!(benches, assembly, eigensolve, haar_average);
criterion_main!(benches);
