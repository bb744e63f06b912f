//! Synthetic documents and wall-clock timing for scaling checks.

use std::time::{Duration, Instant};

use crate::docformat::{print_document, Document, Element};
use crate::registry::Registry;

pub const GENERATORS: [&str; 2] = ["nested-stacks", "insertion-sort-like"];

const FANOUT: usize = 8;

/// Exactly `n` nodes: stacks with up to eight children each, alternating
/// vertical and horizontal by depth, with rects at the leaves.
pub fn nested_stacks(n: usize) -> Document {
    fn build(i: usize, depth: usize, n: usize) -> Element {
        let first = FANOUT * i + 1;
        if first >= n {
            let w = 4.0 + (i % 7) as f64;
            let h = 3.0 + (i % 5) as f64;
            return Element::new("rect").prop("width", w).prop("height", h);
        }
        let kind = if depth.is_multiple_of(2) { "stackV" } else { "stackH" };
        let mut e = Element::new(kind).prop("spacing", 2.0);
        for c in first..(first + FANOUT).min(n) {
            e.children.push(build(c, depth + 1, n));
        }
        e
    }
    Document {
        root: build(0, 0, n.max(1)),
    }
}

/// Rows of padded digit cells, one row per step, with an arrow between
/// consecutive rows.
pub fn insertion_sort_like(n: usize) -> Document {
    let mut rows = Element::new("stackV").prop("spacing", 20.0).prop("alignment", "left");
    for i in 0..n {
        let mut row = Element::new("stackH").prop("spacing", 10.0);
        for j in 0..n {
            let digit = ((i * 7 + j * 3) % 10).to_string();
            let cell = Element::new("background")
                .named(format!("r{i}c{j}"))
                .prop("padding", 5.0)
                .child(Element::new("text").prop("content", digit));
            row.children.push(cell);
        }
        rows.children.push(row);
    }
    let mut root = Element::new("group").child(rows);
    for i in 1..n {
        root.children.push(
            Element::new("arrow")
                .child(Element::reference([format!("r{}c{}", i - 1, i)]))
                .child(Element::reference([format!("r{i}c{}", i / 2)])),
        );
    }
    Document { root }
}

/// Node count of [`insertion_sort_like`] for `n` elements.
pub fn insertion_sort_like_nodes(n: usize) -> usize {
    if n == 0 {
        return 2;
    }
    2 + n * (1 + 2 * n) + 3 * (n - 1)
}

pub fn generate(generator: &str, size: usize) -> Option<Document> {
    match generator {
        "nested-stacks" => Some(nested_stacks(size)),
        "insertion-sort-like" => Some(insertion_sort_like(size)),
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub size: usize,
    pub nodes: usize,
    pub median: Duration,
}

/// Median wall time of parse, layout and paint over `reps` runs, after one
/// untimed warm-up run.
pub fn time_document(doc: &Document, registry: &Registry, reps: usize) -> Result<Duration, String> {
    let bytes = print_document(doc).into_bytes();
    let run = || -> Result<(), String> {
        let compiled = crate::engine::compile(&bytes, registry)
            .map_err(|d| d.first().map_or_else(|| "compile failed".to_owned(), |d| d.to_string()))?;
        let svg = crate::renderer::paint(&compiled.scene, registry);
        std::hint::black_box(svg);
        Ok(())
    };
    run()?;
    let mut times = Vec::with_capacity(reps.max(1));
    for _ in 0..reps.max(1) {
        let t = Instant::now();
        run()?;
        times.push(t.elapsed());
    }
    times.sort();
    Ok(times[times.len() / 2])
}

pub fn run_bench(generator: &str, sizes: &[usize], reps: usize, registry: &Registry) -> Result<Vec<BenchRow>, String> {
    let mut rows = Vec::new();
    for &size in sizes {
        if size == 0 {
            return Err("sizes must be positive".into());
        }
        let doc = generate(generator, size).ok_or_else(|| format!("unknown generator `{generator}`"))?;
        let nodes = doc.root.count();
        let median = time_document(&doc, registry, reps)?;
        rows.push(BenchRow { size, nodes, median });
    }
    Ok(rows)
}
