//! Named systems bundled with the library.

use crate::error::{Error, Result};
use crate::io::parse_system;
use crate::linsys::LinearSystem;

const ENTRIES: &[(&str, &str)] = &[
    ("ap3-f5", include_str!("../catalog/ap3-f5.sys")),
    ("ap4-f5", include_str!("../catalog/ap4-f5.sys")),
    ("ap4-f7", include_str!("../catalog/ap4-f7.sys")),
    ("ap4-f9", include_str!("../catalog/ap4-f9.sys")),
    ("dup-2x5-f5", include_str!("../catalog/dup-2x5-f5.sys")),
    ("mixed-2x5-f3", include_str!("../catalog/mixed-2x5-f3.sys")),
    ("pair-f3", include_str!("../catalog/pair-f3.sys")),
    ("paired4-f5", include_str!("../catalog/paired4-f5.sys")),
    ("pairs4-f5", include_str!("../catalog/pairs4-f5.sys")),
    ("schur-f3", include_str!("../catalog/schur-f3.sys")),
    ("schur-f5", include_str!("../catalog/schur-f5.sys")),
    ("sum3-f3", include_str!("../catalog/sum3-f3.sys")),
    ("sum4-f3", include_str!("../catalog/sum4-f3.sys")),
    ("sum4-f4", include_str!("../catalog/sum4-f4.sys")),
    ("sum4-f5", include_str!("../catalog/sum4-f5.sys")),
    ("twos-2x4-f3", include_str!("../catalog/twos-2x4-f3.sys")),
    ("twos-2x4-f5", include_str!("../catalog/twos-2x4-f5.sys")),
    ("wide-2x5-f5", include_str!("../catalog/wide-2x5-f5.sys")),
    ("zero-2x4-f3", include_str!("../catalog/zero-2x4-f3.sys")),
    ("zero-3x5-f5", include_str!("../catalog/zero-3x5-f5.sys")),
];

/// A bundled system file.
#[derive(Clone, Copy, Debug)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub text: &'static str,
}

impl CatalogEntry {
    /// The first comment line of the file.
    pub fn description(&self) -> &'static str {
        self.text
            .lines()
            .find_map(|l| l.strip_prefix('#'))
            .map_or("", str::trim)
    }

    pub fn system(&self) -> Result<LinearSystem> {
        parse_system(self.text)
    }
}

pub fn entries() -> impl Iterator<Item = CatalogEntry> {
    ENTRIES
        .iter()
        .map(|&(name, text)| CatalogEntry { name, text })
}

pub fn entry(name: &str) -> Result<CatalogEntry> {
    entries()
        .find(|e| e.name == name)
        .ok_or_else(|| Error::usage(format!("no catalog system named '{name}'")))
}

pub fn system(name: &str) -> Result<LinearSystem> {
    entry(name)?.system()
}
