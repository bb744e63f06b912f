//! Randomized whole-pipeline properties over documents that use refs.

use bluefish::docformat::resolve_names;
use bluefish::renderer::Rect;
use bluefish::{compile_document, paint, Code, Document, Element, Registry, ResolvedScene};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn close(a: &Rect, b: &Rect) -> bool {
    [(a.x, b.x), (a.y, b.y), (a.width, b.width), (a.height, b.height)]
        .iter()
        .all(|(p, q)| (p - q).abs() <= 1e-6)
}

fn leaf(rng: &mut ChaCha8Rng, name: String) -> Element {
    let e = match rng.gen_range(0..3) {
        0 => Element::new("rect")
            .prop("width", rng.gen_range(1.0..80.0))
            .prop("height", rng.gen_range(1.0..80.0)),
        1 => Element::new("circle").prop("r", rng.gen_range(1.0..40.0)),
        _ => Element::new("text").prop("content", "x".repeat(rng.gen_range(1..8))),
    };
    e.named(name)
}

fn relation(rng: &mut ChaCha8Rng, kind: &str) -> Element {
    match kind {
        "stackV" => Element::new(kind)
            .prop("spacing", rng.gen_range(0.0..30.0))
            .prop("alignment", *["left", "centerX", "right"].choose(rng).unwrap()),
        "stackH" => Element::new(kind)
            .prop("spacing", rng.gen_range(0.0..30.0))
            .prop("alignment", *["top", "centerY", "bottom"].choose(rng).unwrap()),
        "align" => Element::new(kind).prop(
            "alignment",
            *[
                "left", "centerX", "right", "top", "centerY", "bottom", "center", "topLeft",
            ]
            .choose(rng)
            .unwrap(),
        ),
        "distribute" => Element::new(kind)
            .prop("direction", *["vertical", "horizontal"].choose(rng).unwrap())
            .prop("spacing", rng.gen_range(0.0..30.0)),
        "background" => Element::new(kind).prop("padding", rng.gen_range(0.0..12.0)),
        _ => Element::new(kind),
    }
}

fn named(scene: &ResolvedScene, names: &[String]) -> Vec<Rect> {
    names
        .iter()
        .map(|n| scene.named(n).expect("named leaf").bounds)
        .collect()
}

/// `R(leaves)` against `group(leaves, R(refs to leaves))`.
fn denesting_holds(seed: u64, kind: &str) -> Result<(), TestCaseError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(2..=5);
    let names: Vec<String> = (0..n).map(|i| format!("n{i}")).collect();
    let leaves: Vec<Element> = names.iter().map(|nm| leaf(&mut rng, nm.clone())).collect();
    let r = relation(&mut rng, kind);

    let mut nested = r.clone();
    nested.children = leaves.clone();
    let mut outer = r;
    outer.children = names.iter().map(|nm| Element::reference([nm.clone()])).collect();
    let mut denested = Element::new("group");
    denested.children = leaves;
    denested.children.push(outer);

    let reg = Registry::standard();
    let a = compile_document(&Document { root: nested }, &reg).expect("nested compiles");
    let b = compile_document(&Document { root: denested }, &reg).expect("denested compiles");
    for (i, (p, q)) in named(&a.scene, &names).iter().zip(named(&b.scene, &names)).enumerate() {
        prop_assert!(close(p, &q), "{kind} child {i}: nested {p:?} vs denested {q:?}");
    }
    Ok(())
}

/// A base hierarchy of named elements followed by root-level relations
/// over refs to earlier elements. `broken` may add a dangling selector.
fn random_document(seed: u64, broken: bool) -> Document {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counter = 0;
    let mut names = Vec::new();
    fn base(rng: &mut ChaCha8Rng, depth: u32, counter: &mut usize, names: &mut Vec<String>) -> Element {
        let name = format!("e{counter}");
        *counter += 1;
        names.push(name.clone());
        if depth == 0 || rng.gen_bool(0.4) {
            return leaf(rng, name);
        }
        let kind = *["stackV", "stackH", "background", "align", "distribute", "group"]
            .choose(rng)
            .unwrap();
        let mut e = relation(rng, kind).named(name);
        let min = if kind == "distribute" { 2 } else { 1 };
        for _ in 0..rng.gen_range(min..=3) {
            e.children.push(base(rng, depth - 1, counter, names));
        }
        e
    }
    let mut root = Element::new("group");
    for _ in 0..rng.gen_range(1..=3) {
        root.children.push(base(&mut rng, 2, &mut counter, &mut names));
    }
    for _ in 0..rng.gen_range(1..=4) {
        let kind = *["stackV", "stackH", "align", "distribute", "background", "arrow", "line"]
            .choose(&mut rng)
            .unwrap();
        let mut r = relation(&mut rng, kind);
        let k = if matches!(kind, "arrow" | "line" | "distribute") {
            2
        } else {
            rng.gen_range(1..=3)
        };
        for nm in names.choose_multiple(&mut rng, k.min(names.len())) {
            r.children.push(Element::reference([nm.clone()]));
        }
        if r.children.len() < k {
            r.children.push(leaf(&mut rng, format!("extra{counter}")));
            counter += 1;
        }
        if broken && rng.gen_bool(0.3) {
            r.children.push(Element::reference(["missing"]));
        }
        root.children.push(r);
    }
    Document { root }
}

/// The same scene with every ref detached from its parent.
fn without_refs(scene: &ResolvedScene) -> ResolvedScene {
    let mut s = scene.clone();
    let refs: Vec<bool> = s.nodes.iter().map(|n| n.is_ref()).collect();
    for n in &mut s.nodes {
        n.children.retain(|c| !refs[c.0]);
    }
    s
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn denesting_preserves_geometry(seed in any::<u64>()) {
        for kind in ["stackV", "stackH", "align", "distribute", "background"] {
            denesting_holds(seed, kind)?;
        }
    }

    #[test]
    fn successful_runs_lay_out_each_node_once_and_paint(seed in any::<u64>()) {
        let reg = Registry::standard();
        let doc = random_document(seed, false);
        match compile_document(&doc, &reg) {
            Ok(c) => {
                for (n, calls) in c.scene.nodes.iter().zip(&c.layout_calls) {
                    prop_assert_eq!(*calls, u32::from(!n.is_ref()), "{}", n.path);
                }
                let svg = paint(&c.scene, &reg);
                prop_assert!(svg.starts_with("<svg") && svg.ends_with("</svg>\n"));
                prop_assert_eq!(paint(&without_refs(&c.scene), &reg), svg);
            }
            Err(diags) => {
                // only placement conflicts are expected from these documents
                prop_assert!(diags.iter().all(|d| d.code == Code::DimensionConflict), "{:?}", diags);
            }
        }
    }

    #[test]
    fn failures_always_name_a_node(seed in any::<u64>()) {
        let reg = Registry::standard();
        if let Err(diags) = compile_document(&random_document(seed, true), &reg) {
            prop_assert!(!diags.is_empty());
            for d in &diags {
                prop_assert!(!d.paths.is_empty() && d.paths.iter().all(|p| !p.is_empty()), "{d}");
            }
        }
    }

    #[test]
    fn compile_is_deterministic(seed in any::<u64>()) {
        let reg = Registry::standard();
        let doc = random_document(seed, false);
        let a = compile_document(&doc, &reg).map(|c| bluefish::dump_scene(&c.scene));
        let b = compile_document(&doc, &reg).map(|c| bluefish::dump_scene(&c.scene));
        prop_assert_eq!(a, b);
    }

    /// Whatever other relations did first, a successful align leaves its
    /// children sharing the guideline.
    #[test]
    fn aligned_children_share_the_guideline(seed in any::<u64>(), role in 0usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let names: Vec<String> = (0..4).map(|i| format!("n{i}")).collect();
        let mut row = Element::new("stackV").prop("spacing", 7.0).prop("alignment", "left");
        row.children = names[..2].iter().map(|n| leaf(&mut rng, n.clone())).collect();
        let mut root = Element::new("group").child(row);
        for n in &names[2..] {
            root.children.push(leaf(&mut rng, n.clone()));
        }
        let alignment = ["left", "centerX", "right"][role];
        let mut picked: Vec<&String> = names.choose_multiple(&mut rng, 3).collect();
        picked.shuffle(&mut rng);
        let mut al = Element::new("align").prop("alignment", alignment);
        al.children = picked.iter().map(|n| Element::reference([(*n).clone()])).collect();
        root.children.push(al);

        match compile_document(&Document { root }, &Registry::standard()) {
            Ok(c) => {
                let xs: Vec<f64> = picked
                    .iter()
                    .map(|n| {
                        let b = c.scene.named(n).unwrap().bounds;
                        b.x + b.width * role as f64 / 2.0
                    })
                    .collect();
                for x in &xs {
                    prop_assert!((x - xs[0]).abs() <= 1e-6, "{alignment}: {xs:?}");
                }
            }
            Err(d) => prop_assert_eq!(d[0].code, Code::DimensionConflict),
        }
    }

    /// Renaming inside a named relation never changes what an outside
    /// selector that does not enter it resolves to.
    #[test]
    fn names_inside_a_scope_stay_encapsulated(inner in prop::collection::vec(prop::sample::select(vec!["a", "b", "c", "d"]), 3)) {
        let build = |inner: &[&str]| {
            let mut boxed = Element::new("background").named("box");
            for n in inner.iter().collect::<std::collections::BTreeSet<_>>() {
                boxed.children.push(Element::new("rect").named(*n).prop("width", 1.0).prop("height", 1.0));
            }
            let root = Element::new("group")
                .child(Element::new("rect").named("a").prop("width", 2.0).prop("height", 2.0))
                .child(Element::new("rect").named("b").prop("width", 2.0).prop("height", 2.0))
                .child(boxed)
                .child(Element::new("stackV").child(Element::reference(["a"])).child(Element::reference(["b"])));
            Document { root }
        };
        let baseline = resolve_names(&build(&["x", "y", "z"])).unwrap();
        let doc = build(&inner);
        let renamed = resolve_names(&doc).unwrap();
        let outer_targets = |t: &bluefish::docformat::NameTable| t.refs.values().copied().collect::<Vec<_>>();
        // element indices shift with the number of inner rects; compare by path
        let flat = bluefish::docformat::Flat::new(&doc.root);
        let base_doc = build(&["x", "y", "z"]);
        let base_flat = bluefish::docformat::Flat::new(&base_doc.root);
        let paths = |f: &bluefish::docformat::Flat, ids: Vec<usize>| ids.into_iter().map(|i| f.paths[i].clone()).collect::<Vec<_>>();
        prop_assert_eq!(paths(&flat, outer_targets(&renamed)), paths(&base_flat, outer_targets(&baseline)));
    }
}
