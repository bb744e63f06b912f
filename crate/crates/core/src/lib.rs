//! Declarative diagram compiler: JSON documents of marks and relations,
//! laid out in one pass over a compound scenegraph and rendered to SVG.
//!
//! ```
//! let doc = br#"{"bluefish":1,"root":{"kind":"stackV","props":{"spacing":30},"children":[
//!     {"kind":"rect","name":"a","props":{"width":10,"height":20}},
//!     {"kind":"rect","name":"b","props":{"width":30,"height":10}}]}}"#;
//! let out = bluefish::render(doc, &bluefish::Registry::standard()).unwrap();
//! assert!(out.svg.starts_with("<svg"));
//! let a = out.compiled.scene.named("a").unwrap();
//! assert_eq!((a.bounds.x, a.bounds.y), (-5.0, 0.0));
//! ```

pub mod bench;
pub mod cli;
pub mod diagnostics;
pub mod docformat;
pub mod engine;
pub mod geometry;
pub mod props;
pub mod registry;
pub mod relations;
pub mod renderer;
pub mod scenegraph;

pub use diagnostics::{Code, Diagnostic, Severity};
pub use docformat::{parse_document, print_document, Document, Element};
pub use engine::{compile, compile_document, Compiled};
pub use registry::{ElementKindSpec, Registry};
pub use renderer::{dump_scene, paint, ResolvedScene};

/// SVG text, canonical dump and the compile result for one document.
#[derive(Debug, Clone)]
pub struct Rendered {
    pub svg: String,
    pub dump: String,
    pub compiled: Compiled,
}

pub fn render(bytes: &[u8], registry: &Registry) -> Result<Rendered, Vec<Diagnostic>> {
    let compiled = compile(bytes, registry)?;
    Ok(Rendered {
        svg: paint(&compiled.scene, registry),
        dump: dump_scene(&compiled.scene),
        compiled,
    })
}
