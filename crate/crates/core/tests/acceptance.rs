//! One PASS/FAIL line per acceptance criterion. Runs without the libtest
//! harness so the lines always reach stdout.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::Command;
use std::time::Instant;

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sepal::constructions::{
    build_emn, emn_sweep, excess_weight_vertices, one_step_resolution, quotient_graph, resolution_to_weighted_names,
    separated_of_vertex_weighted, separated_of_weighted, standard_sweep, HSatSet,
};
use sepal::graphs::{text, BipartiteSeparatedGraph, GraphDoc, WeightedGraph};
use sepal::homs::{
    gamma, gamma_commutator_form, phi0, phi1, phi_vw, rho_tau, verify, GeneratorMap, RelationSet, VerifyReport,
};
use sepal::mnlab::{example_59_report, full_weighted, ideal_matrices, ideal_matrices_from_hsat, minimal_configurations};
use sepal::monoids::{m1_of, order_ideal_oracle, order_ideals_weighted, Budget, LeavittType};
use sepal::staralg::{letter, AlgElement, Algebra, Letter, Scalar, Word};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Every bipartite graph attached to the sweep: `E(ω)₁` of each weighted
/// graph, `E(ω^M)` of its completion, and `E(m,n)` for `m ≤ n ≤ 3`.
fn bipartite_sweep() -> Vec<(String, BipartiteSeparatedGraph)> {
    let mut out = Vec::new();
    for g in standard_sweep() {
        let tag = text::print(&g.to_raw()).replace('\n', "; ");
        out.push((format!("E1 of {tag}"), separated_of_weighted(&g).unwrap()));
        out.push((format!("E(wM) of {tag}"), separated_of_vertex_weighted(&g.max_completion()).unwrap()));
    }
    for b in emn_sweep(3) {
        let tag = format!("E({},{})", b.upper().len(), b.lower().len());
        out.push((tag, b));
    }
    out
}

fn check_reports(tag: &str, reports: Vec<VerifyReport>, total: &mut usize) -> Result<(), String> {
    for r in reports {
        *total += r.checked;
        if let Some(f) = r.failures().next() {
            return Err(format!("{} on {} for {tag}: {} -> {:?}", r.map, r.kind, f.label, f.residue));
        }
    }
    Ok(())
}

fn verify_all(map: &GeneratorMap, sets: &[RelationSet]) -> Vec<VerifyReport> {
    sets.iter().map(|rels| verify(map, rels).unwrap()).collect()
}

fn relation_kill() -> Outcome {
    let mut total = 0;
    let mut graphs = 0;
    for g in standard_sweep() {
        let tag = text::print(&g.to_raw());
        check_reports(&tag, verify_all(&phi1(&g).unwrap(), &[RelationSet::l1(&g)]), &mut total)?;
        let full = g.max_completion();
        check_reports(&tag, verify_all(&phi_vw(&full).unwrap(), &[RelationSet::weighted(&full)]), &mut total)?;
        if g.is_vertex_weighted() {
            check_reports(&tag, verify_all(&phi_vw(&g).unwrap(), &[RelationSet::weighted(&g)]), &mut total)?;
        }
        graphs += 1;
    }
    for (tag, b) in bipartite_sweep() {
        check_reports(&tag, verify_all(&phi0(&b).unwrap(), &[RelationSet::separated(b.separated())]), &mut total)?;
        check_reports(&tag, verify_all(&rho_tau(&b).unwrap(), &[RelationSet::lv(&b), RelationSet::lw(&b)]), &mut total)?;
        graphs += 1;
    }
    Ok(format!("{graphs} graphs, {total} relation images all normalize to 0"))
}

fn kernel_check() -> Outcome {
    let mut checked = 0;
    let mut nonzero = 0;
    for (m, n) in [(2, 3), (3, 3)] {
        let b = build_emn(m, n).unwrap();
        let alg = Algebra::bipartite(&b);
        let map = phi0(&b).unwrap();
        let d = b.graph();
        for v in b.upper() {
            let names: Vec<&str> = d.out_edges(v).iter().map(|&e| d.edge_name(e)).collect();
            for e in &names {
                for f in &names {
                    for g in &names {
                        for h in &names {
                            let x = gamma(&alg, e, f, g, h).unwrap();
                            let y = alg.normal_form(&gamma_commutator_form(&alg, e, f, g, h).unwrap());
                            ensure(x == y, || format!("E({m},{n}) gamma({e},{f},{g},{h}) differs from e*[ff*,gg*]h"))?;
                            let image = map.apply_element(&x).unwrap();
                            ensure(image.is_zero(), || format!("E({m},{n}) gamma({e},{f},{g},{h}) survives phi0"))?;
                            checked += 1;
                            nonzero += usize::from(!x.is_zero());
                        }
                    }
                }
            }
        }
    }
    ensure(nonzero > 0, || "every gamma vanished; the check is vacuous".into())?;
    Ok(format!("{checked} generators ({nonzero} nonzero) on E(2,3), E(3,3)"))
}

/// A random path of at most 6 letters that is already reduced.
fn random_basis_word<R: Rng>(alg: &Algebra, letters: &[Letter], rng: &mut R) -> Word {
    loop {
        let len = rng.gen_range(0..=6);
        if len == 0 {
            let v = rng.gen_range(0..alg.graph().graph().vertex_count()) as u32;
            return Word::vertex(v);
        }
        let mut path = vec![letters[rng.gen_range(0..letters.len())]];
        while path.len() < len {
            let here = alg.letter_range(*path.last().unwrap());
            let next: Vec<Letter> = letters.iter().copied().filter(|&l| alg.letter_source(l) == here).collect();
            path.push(next[rng.gen_range(0..next.len())]);
        }
        let w = alg.word(&path).expect("path composes");
        if alg.is_reduced(&w) {
            return w;
        }
    }
}

fn random_element<R: Rng>(alg: &Algebra, letters: &[Letter], rng: &mut R) -> AlgElement {
    let terms = rng.gen_range(1..=3);
    alg.from_terms((0..terms).map(|_| {
        let c = Scalar::ratio(rng.gen_range(-3..=3i64), rng.gen_range(1..=2i64));
        (random_basis_word(alg, letters, rng), c)
    }))
}

fn normal_form_engine() -> Outcome {
    let alg = Algebra::bipartite(&build_emn(2, 3).unwrap());
    let letters: Vec<Letter> = alg
        .graph()
        .graph()
        .edge_ids()
        .flat_map(|e| [letter(e, false), letter(e, true)])
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5e9a1);
    let mut nonzero = 0;
    let rounds = 1200;
    for k in 0..rounds {
        let (a, b, c) = if k % 2 == 0 {
            let mono = |rng: &mut ChaCha8Rng| alg.monomial(random_basis_word(&alg, &letters, rng), Scalar::one());
            (mono(&mut rng), mono(&mut rng), mono(&mut rng))
        } else {
            (
                random_element(&alg, &letters, &mut rng),
                random_element(&alg, &letters, &mut rng),
                random_element(&alg, &letters, &mut rng),
            )
        };
        let raw = alg.mul_raw(&a, &b).unwrap();
        let nf = alg.normal_form(&raw);
        let shuffled = alg.normal_form_random(&raw, &mut rng);
        ensure(nf == shuffled, || format!("orders disagree on {}", alg.format(&raw)))?;
        ensure(alg.normal_form(&nf) == nf, || format!("nf not idempotent on {}", alg.format(&raw)))?;
        ensure(alg.star(&alg.star(&raw)) == raw, || "star is not an involution".into())?;
        let left = alg.normal_form(&alg.star(&raw));
        let right = alg.mul(&alg.star(&b), &alg.star(&a)).unwrap();
        ensure(left == right, || format!("(ab)* != b*a* for {}", alg.format(&raw)))?;
        ensure(alg.normal_form(&alg.star(&nf)) == left, || "star does not commute with nf".into())?;
        let ab_c = alg.mul(&alg.mul(&a, &b).unwrap(), &c).unwrap();
        let a_bc = alg.mul(&a, &alg.mul(&b, &c).unwrap()).unwrap();
        ensure(ab_c == a_bc, || format!("(ab)c != a(bc) at round {k}"))?;
        nonzero += usize::from(!nf.is_zero());
    }
    Ok(format!("{rounds} products in E(2,3), {nonzero} with nonzero normal form"))
}

fn resolution_counts() -> Outcome {
    let mut count = 0;
    for (tag, b) in bipartite_sweep() {
        let sep = b.separated();
        let expected: usize = b
            .upper()
            .into_iter()
            .map(|u| sep.csets_at(u).iter().map(|&x| sep.cset(x).edges.len()).product::<usize>())
            .sum();
        let r = one_step_resolution(&b).map_err(|e| format!("{tag}: {e}"))?;
        ensure(r.lower().len() == expected, || format!("{tag}: {} lower vertices, expected {expected}", r.lower().len()))?;
        count += 1;
    }
    let r = one_step_resolution(&build_emn(2, 3).unwrap()).unwrap();
    let mut sizes: Vec<usize> = r.separated().csets().iter().map(|x| x.edges.len()).collect();
    sizes.sort_unstable();
    ensure(r.lower().len() == 6, || format!("E(2,3): {} lower vertices", r.lower().len()))?;
    ensure(r.graph().edge_count() == 12, || format!("E(2,3): {} edges", r.graph().edge_count()))?;
    ensure(sizes == [2, 2, 2, 3, 3], || format!("E(2,3): C-set sizes {sizes:?}"))?;
    Ok(format!("{count} resolutions match the tuple count; E(2,3) gives 6 lower vertices, 12 edges, sets [2,2,2,3,3]"))
}

fn omega0_numbers() -> Outcome {
    let mut cases = 0;
    for n in 4..=6u32 {
        for m in 3..n as usize {
            let r = example_59_report(m, n, Budget::default()).map_err(|e| e.to_string())?;
            let d = u64::from(n) - m as u64;
            let g = (m as u64 - 2).gcd(&(u64::from(n) - 2));
            let tag = format!("(m,n) = ({m},{n})");
            ensure(r.group.is_cyclic_of_order(d), || format!("{tag}: group {}", r.group))?;
            ensure(r.leavitt_type == LeavittType::Found { p: 1, q: d }, || {
                format!("{tag}: type {:?}", r.leavitt_type)
            })?;
            ensure(r.nontrivial_ideals.len() == 1, || format!("{tag}: {} ideals", r.nontrivial_ideals.len()))?;
            ensure(r.quotient.group.is_cyclic_of_order(g), || format!("{tag}: quotient group {}", r.quotient.group))?;
            ensure(r.quotient.leavitt_type == LeavittType::Found { p: 1, q: g }, || {
                format!("{tag}: quotient type {:?}", r.quotient.leavitt_type)
            })?;
            ensure(r.diagonal_map.verify.all_zero, || format!("{tag}: diagonal map leaves a relation"))?;
            cases += 1;
        }
    }
    Ok(format!("{cases} pairs (m,n) with 3 ≤ m < n ≤ 6"))
}

/// Largest coordinate sum of a relation side; the oracle needs at least this.
fn relation_cap(g: &WeightedGraph) -> u64 {
    let p = m1_of(g);
    p.relations()
        .iter()
        .flat_map(|(l, r)| [l.iter().sum::<u64>(), r.iter().sum::<u64>()])
        .max()
        .unwrap_or(1)
}

fn lattice_isomorphism() -> Outcome {
    let mut count = 0;
    for g in standard_sweep() {
        let lattice = order_ideals_weighted(&g).map_err(|e| e.to_string())?;
        let oracle = order_ideal_oracle(&m1_of(&g), relation_cap(&g));
        ensure(lattice.generator_sets() == oracle, || {
            format!(
                "{}: hsat gives {:?}, oracle gives {oracle:?}",
                text::print(&g.to_raw()),
                lattice.generator_sets()
            )
        })?;
        count += 1;
    }
    let full = full_weighted(2, 2).map_err(|e| e.to_string())?;
    let hsat = order_ideals_weighted(&full).unwrap().len();
    let matrices = ideal_matrices(2, 2).unwrap();
    let via_hsat = ideal_matrices_from_hsat(2, 2).unwrap();
    let minimal = minimal_configurations(2, 2).unwrap();
    ensure(hsat == 8, || format!("(2,2): {hsat} hsat sets"))?;
    ensure(matrices.len() == 7, || format!("(2,2): {} ideal matrices", matrices.len()))?;
    ensure(matrices == via_hsat, || "(2,2): matrix lists disagree".into())?;
    ensure(minimal.len() == 2, || format!("(2,2): {} minimal configurations", minimal.len()))?;
    Ok(format!("{count} sweep graphs agree with the oracle; (2,2) gives 8 / 7 / 2"))
}

fn quotient_consistency() -> Outcome {
    let mut count = 0;
    for g in standard_sweep() {
        let tag = text::print(&g.to_raw());
        let direct = separated_of_weighted(&g).unwrap();
        let res = one_step_resolution(&separated_of_vertex_weighted(&g.max_completion()).unwrap())
            .map_err(|e| format!("{tag}: {e}"))?;
        let h = HSatSet::from_names(res.separated(), &excess_weight_vertices(&g)).map_err(|e| format!("{tag}: {e}"))?;
        let q = quotient_graph(res.separated(), &h).map_err(|e| format!("{tag}: {e}"))?;
        let (vmap, emap) = resolution_to_weighted_names(&g);
        let rename = |m: &std::collections::HashMap<String, String>, x: &str| m.get(x).cloned().unwrap_or_else(|| x.to_string());
        let renamed = q
            .renamed(|v| rename(&vmap, v), |e| rename(&emap, e))
            .map_err(|e| format!("{tag}: renaming failed: {e:?}"))?;
        ensure(renamed.same_structure(direct.separated()), || {
            format!("{tag}: quotient {:?} vs {:?}", renamed.separation_names(), direct.separated().separation_names())
        })?;
        count += 1;
    }
    Ok(format!("{count} sweep graphs"))
}

fn corner_fullness() -> Outcome {
    let mut witnesses = 0;
    for (tag, b) in bipartite_sweep() {
        let alg = Algebra::bipartite(&b);
        let d = b.graph();
        for w in b.lower() {
            let found = d.in_edges(w).iter().any(|&e| {
                let x = alg.mul(&alg.ghost(e), &alg.edge(e)).unwrap();
                x == alg.vertex(w)
            });
            ensure(found, || format!("{tag}: no e with e*e = {}", d.vertex_name(w)))?;
            witnesses += 1;
        }
        let sep = b.separated();
        for v in b.upper() {
            for &x in sep.csets_at(v) {
                let mut sum = alg.zero();
                for &e in &sep.cset(x).edges {
                    sum = alg.add(&sum, &alg.mul(&alg.edge(e), &alg.ghost(e)).unwrap()).unwrap();
                }
                ensure(alg.normal_form(&sum) == alg.vertex(v), || {
                    format!("{tag}: sum over {:?} is not {}", sep.cset_names(x), d.vertex_name(v))
                })?;
                witnesses += 1;
            }
        }
    }
    Ok(format!("{witnesses} witnesses"))
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn run_cli(args: &[&str]) -> Result<(i32, Vec<u8>), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_sepal"))
        .args(args)
        .env_remove("SEPAL_BUDGET_STATES")
        .output()
        .map_err(|e| e.to_string())?;
    Ok((out.status.code().unwrap_or(-1), out.stdout))
}

fn cli_determinism() -> Outcome {
    let e23 = fixture("e23.txt");
    let w22 = fixture("w22.txt");
    let om = fixture("omega0_35.txt");
    let (e23, w22, om) = (e23.to_str().unwrap(), w22.to_str().unwrap(), om.to_str().unwrap());
    let runs: Vec<Vec<&str>> = vec![
        vec!["--json", "validate", "--graph", e23],
        vec!["--json", "validate", "--graph", w22],
        vec!["--json", "construct", "emn", "--m", "2", "--n", "3"],
        vec!["--json", "construct", "resolve", "--graph", e23],
        vec!["--json", "hsat", "enumerate", "--graph", e23],
        vec!["--json", "nf", "--graph", e23, "e3 e3*"],
        vec!["--json", "verify", "phi0", "--graph", e23],
        vec!["--json", "verify", "phi1", "--graph", w22],
        vec!["--json", "ideal-gens", "--kind", "kernel", "--graph", e23],
        vec!["--json", "monoid", "grothendieck", "--graph", om],
        vec!["--json", "monoid", "leavitt-type", "--graph", om, "--generator", "v"],
        vec!["--json", "monoid", "order-ideals", "--graph", om],
        vec!["--json", "mnlab", "example59", "--m", "3", "--n", "5"],
    ];
    for args in &runs {
        let (c1, o1) = run_cli(args)?;
        let (c2, o2) = run_cli(args)?;
        ensure(c1 == 0, || format!("`{}` exited with {c1}: {}", args.join(" "), String::from_utf8_lossy(&o1)))?;
        ensure(c1 == c2 && o1 == o2, || format!("`{}` differs between runs", args.join(" ")))?;
        serde_json::from_slice::<serde_json::Value>(&o1).map_err(|e| format!("`{}`: {e}", args.join(" ")))?;
    }
    let mut round_trips = 0;
    let mut texts: Vec<String> = ["e23.txt", "w22.txt", "omega0_35.txt"]
        .iter()
        .map(|f| std::fs::read_to_string(fixture(f)).unwrap())
        .collect();
    texts.extend(standard_sweep().iter().map(|g| text::print(&g.to_raw())));
    texts.extend(bipartite_sweep().iter().map(|(_, b)| text::print(&b.to_raw())));
    for t in &texts {
        let doc: GraphDoc = text::parse(t).map_err(|e| format!("{e}"))?;
        let printed = text::print_doc(&doc);
        let again = text::parse(&printed).map_err(|e| format!("{e}"))?;
        ensure(again == doc && text::print_doc(&again) == printed, || format!("round trip changes:\n{t}"))?;
        round_trips += 1;
    }
    Ok(format!("{} commands byte-identical across runs, {round_trips} parse/print round trips", runs.len()))
}

fn main() {
    let criteria: Vec<(&str, fn() -> Outcome)> = vec![
        ("relation images vanish on the sweep", relation_kill),
        ("kernel generators", kernel_check),
        ("normal form engine", normal_form_engine),
        ("resolution combinatorics", resolution_counts),
        ("omega0 monoid numbers", omega0_numbers),
        ("order ideal lattice", lattice_isomorphism),
        ("quotient consistency", quotient_consistency),
        ("corner fullness", corner_fullness),
        ("CLI determinism", cli_determinism),
    ];
    let mut failed = BTreeMap::new();
    for (k, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {}. {name}: {detail} ({secs:.2}s)", k + 1),
            Err(why) => {
                println!("FAIL {}. {name}: {why} ({secs:.2}s)", k + 1);
                failed.insert(k + 1, why);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed.len(), criteria.len());
    if !failed.is_empty() {
        std::process::exit(1);
    }
}
