//! Fixtures shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};
use std::path::PathBuf;
use std::process::{Command, Output};

use effcat::monoid::FiniteMonoid;
use effcat::promonad::{CategoryBuilder, Element, FiniteCategory, FiniteProfunctor};

pub fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("testdata").join(name)
}

/// Runs the binary from inside `testdata`.
pub fn effcat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_effcat"))
        .current_dir(data(""))
        .args(args)
        .output()
        .expect("binary runs")
}

pub const PROGRAMS: [&str; 10] = [
    "hello_world",
    "world_hello",
    "identity",
    "print_arg",
    "lets_first",
    "join",
    "echo",
    "swap",
    "stamp",
    "greet",
];

pub fn program(name: &str) -> String {
    std::fs::read_to_string(data(&format!("programs/{name}.arrow"))).unwrap()
}

/// (extra flags, left, right, expected exit code, expected verdict)
pub const EQ_CASES: [(&[&str], &str, &str, i32, &str); 6] = [
    (&[], "hello;print;world;print", "world;print;hello;print", 1, "unequal"),
    (&[], "hello;print;world;print", "hello;print;world;print", 0, "equal"),
    (&[], "hello;print;world;print", "world ; hello * id(A) ; print * id(A) ; print", 0, "equal"),
    (&["--monrun"], "id(R) * hello ; print", "hello * id(R) ; sigma_A_R ; print", 0, "equal"),
    (&["--monrun"], "id(R) * hello ; print ; id(R) * world ; print", "id(R) * world ; print ; id(R) * hello ; print", 1, "unequal"),
    (&["--budget", "1"], "hello;print;world;print", "world ; hello * id(A) ; print * id(A) ; print", 2, "inconclusive"),
];

/// (golden file, arguments)
pub const RENDERS: [(&str, &[&str]); 5] = [
    ("hello_world.txt", &["render", "print.eff", "hello;print;world;print"]),
    ("hello_world.svg", &["render", "print.eff", "hello;print;world;print", "--format", "svg"]),
    (
        "braids.txt",
        &["render", "print.eff", "hello ; id(A) * hello ; id(A) * print ; print", "--monrun", "--as-written"],
    ),
    ("greet.svg", &["render", "shop.eff", "--program", "programs/greet.arrow", "--format", "svg"]),
    ("greet_plain.txt", &["render", "shop.eff", "--program", "programs/greet.arrow", "--no-runtime"]),
];

pub fn point() -> FiniteCategory {
    FiniteCategory::discrete(&["X"])
}

pub fn z2() -> FiniteCategory {
    let mut c = FiniteCategory::from_monoid(&FiniteMonoid::cyclic(2));
    c.objects = vec!["X".into()];
    c
}

pub fn idem() -> FiniteCategory {
    let mut b = CategoryBuilder::new(&["X"]);
    b.arrow("e", "X", "X").unwrap().composite("e", "e", "e").unwrap();
    b.build().unwrap()
}

fn functions(n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out.into_iter().flat_map(|f: Vec<usize>| (0..n).map(move |x| [f.clone(), vec![x]].concat())).collect();
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    functions(n).into_iter().filter(|f| f.iter().collect::<BTreeSet<_>>().len() == n).collect()
}

/// Every profunctor between one-object categories on at most `max` elements,
/// one per isomorphism class.
pub fn all_profunctors(left: &FiniteCategory, right: &FiniteCategory, max: usize) -> Vec<FiniteProfunctor> {
    let mut out = Vec::new();
    for n in 0..=max {
        let fs = functions(n);
        let choose = |c: &FiniteCategory| -> Vec<Vec<Vec<usize>>> {
            let mut acc = vec![vec![]];
            for f in 0..c.len() {
                acc = if c.is_identity(f) {
                    acc.into_iter().map(|t: Vec<Vec<usize>>| [t, vec![(0..n).collect()]].concat()).collect()
                } else {
                    acc.into_iter().flat_map(|t| fs.iter().map(move |g| [t.clone(), vec![g.clone()]].concat())).collect()
                };
            }
            acc
        };
        let mut seen = BTreeSet::new();
        for l in choose(left) {
            for r in choose(right) {
                let canon = permutations(n)
                    .iter()
                    .map(|pi| {
                        let relabel = |t: &Vec<Vec<usize>>| {
                            t.iter()
                                .map(|g| {
                                    let mut h = vec![0; n];
                                    for x in 0..n {
                                        h[pi[x]] = pi[g[x]];
                                    }
                                    h
                                })
                                .collect::<Vec<_>>()
                        };
                        (relabel(&l), relabel(&r))
                    })
                    .min()
                    .unwrap_or_default();
                if !seen.insert(canon) {
                    continue;
                }
                let p = FiniteProfunctor {
                    left: left.clone(),
                    right: right.clone(),
                    elements: (0..n).map(|x| Element { name: format!("p{x}"), a: 0, b: 0 }).collect(),
                    lact: l.iter().map(|g| g.iter().map(|&y| Some(y)).collect()).collect(),
                    ract: (0..n).map(|x| r.iter().map(|g| Some(g[x])).collect()).collect(),
                };
                if p.check().is_ok() {
                    out.push(p);
                }
            }
        }
    }
    out
}

/// Matching triples up to dinatural moves at both seams, merged to a
/// fixpoint.
pub fn triple_classes(p: &FiniteProfunctor, q: &FiniteProfunctor, r: &FiniteProfunctor) -> Vec<BTreeSet<(usize, usize, usize)>> {
    let mut class: HashMap<(usize, usize, usize), usize> = (0..p.len())
        .flat_map(|x| (0..q.len()).flat_map(move |y| (0..r.len()).map(move |z| (x, y, z))))
        .enumerate()
        .map(|(i, t)| (t, i))
        .collect();
    loop {
        let mut changed = false;
        let keys: Vec<_> = class.keys().copied().collect();
        for (x, y, z) in keys {
            let mut pairs = Vec::new();
            for g in 0..p.right.len() {
                pairs.push(((p.act_right(x, g), y, z), (x, q.act_left(g, y), z)));
            }
            for h in 0..q.right.len() {
                pairs.push(((x, q.act_right(y, h), z), (x, y, r.act_left(h, z))));
            }
            for (a, b) in pairs {
                let (ca, cb) = (class[&a], class[&b]);
                if ca != cb {
                    let (keep, drop) = (ca.min(cb), ca.max(cb));
                    for v in class.values_mut() {
                        if *v == drop {
                            *v = keep;
                        }
                    }
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let mut groups: HashMap<usize, BTreeSet<(usize, usize, usize)>> = HashMap::new();
    for (t, c) in class {
        groups.entry(c).or_default().insert(t);
    }
    groups.into_values().collect()
}

pub fn categories() -> Vec<(&'static str, FiniteCategory)> {
    vec![("point", point()), ("Z/2", z2()), ("idempotent", idem())]
}
