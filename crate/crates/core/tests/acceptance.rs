//! One PASS/FAIL line per acceptance criterion. Exits nonzero if any fails.

mod common;

use std::time::{Duration, Instant};

use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use cwres::construction::check_all_filtration_squares;
use cwres::cw::facet_incidence_mod2;
use cwres::monomial::{
    cw_lattice_report, gpw_betti, homogenize_cellular, homogenize_d, is_lattice_linear, is_minimal,
    is_resolution, lyubeznik_complex, scarf_complex, taylor_complex,
};
use cwres::{
    cellular_chain_complex, compare_complexes, d_construction, fixtures, incidence_numbers,
    lcm_lattice, sign_equivalence, CoverStrategy, FieldConfig, RegularCWComplex,
};

const Q: FieldConfig = FieldConfig::Rationals;

type Check = Result<(), String>;
type Criterion = (&'static str, fn() -> Check, Option<Duration>);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn err(e: cwres::Error) -> String {
    e.to_string()
}

fn triangle_square() -> Check {
    let x = fixtures::triangle_square_cw();
    ensure!(x.f_vector() == [1, 4, 5, 2], "f-vector {:?}", x.f_vector());
    let p = x.poset();
    ensure!(
        p.is_cw_poset(Q).is_cw,
        "face poset not certified as a CW-poset"
    );
    let d = d_construction(p, Q, CoverStrategy::SmallestId).map_err(err)?;
    ensure!(d.dims() == [1, 4, 5, 2], "D dims {:?}", d.dims());
    ensure!(d.is_complex, "D is not a complex");
    let c = cellular_chain_complex(&x, Q).map_err(err)?;
    let cmp = compare_complexes(&c, &d.complex, 1);
    ensure!(cmp.isomorphic, "C(X) and D(P) differ: {:?}", cmp.reason);
    ensure!(
        sign_equivalence(&c, &d.complex, 1).is_some(),
        "C(X) and D(P) are not sign-equivalent"
    );
    let total = d.complex.homology().map_err(err)?.total();
    ensure!(total == 0, "total reduced homology {total}");
    Ok(())
}

fn comparison_sweep() -> Check {
    let corpus = common::corpus();
    ensure!(corpus.len() >= 200, "corpus has {} complexes", corpus.len());
    for (n, masks) in &corpus {
        let k = common::complex_from_masks(*n, masks);
        let x = RegularCWComplex::from_simplicial(&k);
        let c = cellular_chain_complex(&x, Q).map_err(err)?;
        let d = d_construction(x.poset(), Q, CoverStrategy::SmallestId).map_err(err)?;
        let cmp = compare_complexes(&c, &d.complex, 1);
        ensure!(cmp.isomorphic, "{masks:?}: {:?}", cmp.reason);
        ensure!(
            sign_equivalence(&c, &d.complex, 1).is_some(),
            "{masks:?}: not sign-equivalent"
        );
        let h = d.complex.homology().map_err(err)?;
        let expected = common::oracle_reduced_betti(masks);
        let got: Vec<usize> = (0..expected.len()).map(|i| h.betti(i as i32)).collect();
        ensure!(
            got == expected,
            "{masks:?}: D homology {got:?}, oracle {expected:?}"
        );
    }
    Ok(())
}

fn filtration_squares() -> Check {
    let mut posets = vec![fixtures::triangle_square_poset()];
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let corpus: Vec<_> = common::corpus()
        .into_iter()
        .filter(|(_, m)| m.len() > 4)
        .collect();
    for (n, masks) in corpus.choose_multiple(&mut rng, 20) {
        posets.push(
            RegularCWComplex::from_simplicial(&common::complex_from_masks(*n, masks))
                .poset()
                .clone(),
        );
    }
    let mut classes = 0;
    for p in &posets {
        let d = d_construction(p, Q, CoverStrategy::SmallestId).map_err(err)?;
        for check in check_all_filtration_squares(p, &d).map_err(err)? {
            ensure!(
                check.holds,
                "square fails at ({}, {})",
                check.element,
                check.j
            );
            classes += check.classes_checked;
        }
    }
    ensure!(classes > 0, "no classes were checked");
    Ok(())
}

fn cw_fixtures() -> Vec<RegularCWComplex> {
    let mut out = vec![fixtures::triangle_square_cw(), fixtures::hollow_triangle()];
    out.extend(
        common::corpus_complexes()
            .iter()
            .map(RegularCWComplex::from_simplicial),
    );
    for i in common::ideal_corpus() {
        out.push(taylor_complex(&i));
        out.push(scarf_complex(&i));
        out.push(lyubeznik_complex(&i, None).unwrap());
    }
    out
}

fn partition_independence() -> Check {
    for x in cw_fixtures() {
        let a = d_construction(x.poset(), Q, CoverStrategy::SmallestId).map_err(err)?;
        let b = d_construction(x.poset(), Q, CoverStrategy::LargestId).map_err(err)?;
        ensure!(a.basis == b.basis, "bases differ");
        for i in 1..=a.max_degree() {
            ensure!(
                a.phi(i) == b.phi(i),
                "phi_{i} differs on complex with f-vector {:?}",
                x.f_vector()
            );
        }
    }
    Ok(())
}

fn incidence() -> Check {
    let gf2 = FieldConfig::prime(2).map_err(err)?;
    for x in cw_fixtures() {
        let inc = incidence_numbers(&x, Q).map_err(err)?;
        ensure!(
            inc.entries().all(|(_, c)| c == 1 || c == -1),
            "entry not a unit"
        );
        for sigma in 0..x.len() {
            for rho in x.cells_of_dim(x.cell(sigma).dim - 2) {
                let s: i32 = x
                    .cell(sigma)
                    .facets
                    .iter()
                    .map(|&t| (inc.get(sigma, t) * inc.get(t, rho)) as i32)
                    .sum();
                ensure!(
                    s == 0,
                    "quadratic relation fails at ({}, {})",
                    x.cell(sigma).id,
                    x.cell(rho).id
                );
            }
        }
        let c2 = cellular_chain_complex(&x, gf2).map_err(err)?;
        for d in 0..=x.dim() {
            ensure!(
                c2.diff(d) == facet_incidence_mod2(&x, d),
                "mod-2 boundary differs in dimension {d}"
            );
        }
    }
    Ok(())
}

fn monomial_suite() -> Check {
    let tri = common::ideal(&[&[1, 1, 0], &[0, 1, 1], &[1, 0, 1]]);
    let taylor = homogenize_cellular(&taylor_complex(&tri), Q).map_err(err)?;
    ensure!(
        is_resolution(&taylor, &tri).map_err(err)?.is_resolution,
        "Taylor is not a resolution"
    );
    ensure!(
        taylor.ranks() == [1, 3, 3, 1],
        "Taylor ranks {:?}",
        taylor.ranks()
    );
    ensure!(!is_minimal(&taylor), "Taylor reported minimal");

    let scarf = homogenize_cellular(&scarf_complex(&tri), Q).map_err(err)?;
    let verdict = is_resolution(&scarf, &tri).map_err(err)?;
    ensure!(
        !verdict.is_resolution,
        "Scarf of the triangle ideal reported a resolution"
    );
    let witnesses: Vec<String> = verdict.failures.iter().map(|f| f.b.clone()).collect();
    ensure!(witnesses == ["xyz"], "Scarf witnesses {witnesses:?}");

    let powers = common::ideal(&[&[2, 0], &[1, 1], &[0, 2]]);
    let scarf = homogenize_cellular(&scarf_complex(&powers), Q).map_err(err)?;
    ensure!(
        is_resolution(&scarf, &powers).map_err(err)?.is_resolution,
        "Scarf of powers not a resolution"
    );
    ensure!(is_minimal(&scarf), "Scarf of powers not minimal");
    ensure!(
        is_lattice_linear(&scarf, &powers).lattice_linear,
        "Scarf of powers not lattice-linear"
    );
    let betti = gpw_betti(&powers, Q).map_err(err)?;
    ensure!(
        scarf.ranks() == [1, 3, 2] && betti.total == scarf.ranks(),
        "ranks {:?} betti {:?}",
        scarf.ranks(),
        betti.total
    );

    let koszul = common::ideal(&[&[1, 0], &[0, 1]]);
    let report = cw_lattice_report(&koszul, Q).map_err(err)?;
    ensure!(
        report.is_cw && report.lattice_linear_certified,
        "Koszul lattice report {report:?}"
    );
    let f = report
        .minimal_cellular
        .ok_or("no minimal cellular resolution")?;
    ensure!(f.ranks() == [1, 2, 1], "Koszul ranks {:?}", f.ranks());
    Ok(())
}

fn cell_poset_equivalence() -> Check {
    let mut count = 0;
    for i in common::ideal_corpus() {
        let complexes = [
            taylor_complex(&i),
            scarf_complex(&i),
            lyubeznik_complex(&i, None).map_err(err)?,
        ];
        for x in complexes {
            let cellular = homogenize_cellular(&x, Q).map_err(err)?;
            let d = d_construction(x.poset(), Q, CoverStrategy::SmallestId).map_err(err)?;
            let poset =
                homogenize_d(x.poset(), &d, &x.multidegrees().map_err(err)?).map_err(err)?;
            let a = is_resolution(&cellular, &i).map_err(err)?.is_resolution;
            let b = is_resolution(&poset, &i).map_err(err)?.is_resolution;
            ensure!(a == b, "is_resolution disagrees: cellular {a}, poset {b}");
            let c = cellular_chain_complex(&x, Q).map_err(err)?;
            ensure!(
                compare_complexes(&c, &d.complex, 1).isomorphic,
                "frames differ"
            );
            count += 1;
        }
    }
    ensure!(count >= 60, "only {count} labeled fixtures");
    Ok(())
}

fn negative_witnesses() -> Check {
    for (gens, witness) in [
        (common::ideal(&[&[1, 1, 0], &[0, 1, 1], &[1, 0, 1]]), "xyz"),
        (common::ideal(&[&[2, 0], &[1, 1], &[0, 2]]), "x^2y^2"),
    ] {
        let report = lcm_lattice(&gens).poset.is_cw_poset(Q);
        ensure!(!report.is_cw, "lattice reported CW");
        ensure!(
            report.witness.as_deref() == Some(witness),
            "witness {:?}, expected {witness}",
            report.witness
        );
    }
    Ok(())
}

fn main() {
    let criteria: [Criterion; 8] = [
        (
            "triangle-and-square fixture",
            triangle_square,
            Some(Duration::from_secs(1)),
        ),
        (
            "C(X) against D(P) over the complex corpus",
            comparison_sweep,
            Some(Duration::from_secs(60)),
        ),
        (
            "filtration squares",
            filtration_squares,
            Some(Duration::from_secs(30)),
        ),
        (
            "cover-assignment independence",
            partition_independence,
            None,
        ),
        ("incidence numbers", incidence, None),
        (
            "monomial suite",
            monomial_suite,
            Some(Duration::from_secs(5)),
        ),
        (
            "cellular and poset homogenizations agree",
            cell_poset_equivalence,
            None,
        ),
        ("negative CW-poset witnesses", negative_witnesses, None),
    ];
    let mut failed = 0;
    for (n, (name, check, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut outcome = check();
        let elapsed = start.elapsed();
        if let (Ok(()), Some(b)) = (&outcome, budget) {
            if elapsed > *b {
                outcome = Err(format!("took {elapsed:?}, budget {b:?}"));
            }
        }
        match outcome {
            Ok(()) => println!(
                "criterion {}: PASS  {name} ({:.3}s)",
                n + 1,
                elapsed.as_secs_f64()
            ),
            Err(why) => {
                failed += 1;
                println!(
                    "criterion {}: FAIL  {name} ({:.3}s): {why}",
                    n + 1,
                    elapsed.as_secs_f64()
                );
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
