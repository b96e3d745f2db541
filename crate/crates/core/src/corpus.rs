//! The shipped example files, embedded at compile time.

macro_rules! corpus {
    ($($name:literal),* $(,)?) => {
        /// `(file name, contents)` for every corpus file.
        pub const FILES: &[(&str, &str)] = &[$(($name, include_str!(concat!("../corpus/", $name)))),*];
    };
}

corpus!(
    "and-elim.json",
    "ars-fx.json",
    "converse-extended.json",
    "converse-rule.json",
    "converse.json",
    "elim-derivation.json",
    "elim-mimicry.json",
    "elim-system.json",
    "forall-elim.json",
    "hilbert-min.json",
    "mp-twice.json",
    "nd-imp-intro-instance.json",
    "nd-minimal.json",
    "nd-weak-elim.json",
    "necessitation-rule.json",
    "necessitation.json",
    "or-intro.json",
    "sig-fa.json",
    "skk.json",
);

pub fn file(name: &str) -> Option<&'static str> {
    FILES.iter().find(|(n, _)| *n == name).map(|(_, text)| *text)
}

/// Directory holding the corpus in a source checkout.
pub fn dir() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus")
}
