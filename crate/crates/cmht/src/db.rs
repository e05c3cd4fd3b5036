//! Bundled field definitions with a checksum manifest.

use crate::field::CMField;
use crate::{Error, Result};
use sha2::{Digest, Sha256};

const FILES: &[(&str, &str)] = &[
    ("Qi", include_str!("../fields/Qi.field")),
    ("Qsqrt-2", include_str!("../fields/Qsqrt-2.field")),
    ("Qsqrt-5", include_str!("../fields/Qsqrt-5.field")),
    ("Qzeta5", include_str!("../fields/Qzeta5.field")),
    ("Qzeta12", include_str!("../fields/Qzeta12.field")),
];

const MANIFEST: &str = include_str!("../fields/MANIFEST");

pub fn names() -> Vec<&'static str> {
    FILES.iter().map(|(n, _)| *n).collect()
}

pub fn sha256_hex(text: &str) -> String {
    let h = Sha256::digest(text.as_bytes());
    h.iter().map(|b| format!("{:02x}", b)).collect()
}

/// Definition text of a bundled field, checked against the manifest.
pub fn source(name: &str) -> Result<&'static str> {
    let (_, text) = FILES
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| Error::malformed(format!("unknown field '{}'", name)))?;
    let file = format!("{}.field", name);
    let expected = MANIFEST
        .lines()
        .filter_map(|l| l.split_once(char::is_whitespace))
        .find(|(_, f)| f.trim() == file)
        .map(|(h, _)| h.trim())
        .ok_or_else(|| Error::invalid("manifest", format!("{} missing from manifest", file)))?;
    if sha256_hex(text) != expected {
        return Err(Error::invalid("manifest", format!("checksum mismatch for {}", file)));
    }
    Ok(text)
}

pub fn load(name: &str) -> Result<CMField> {
    CMField::parse(source(name)?)
}

/// Load a bundled field by name, or a field file from disk.
pub fn resolve(arg: &str) -> Result<CMField> {
    if FILES.iter().any(|(n, _)| *n == arg) {
        return load(arg);
    }
    let text = std::fs::read_to_string(arg)
        .map_err(|e| Error::malformed(format!("'{}' is neither a bundled field nor a readable file: {}", arg, e)))?;
    CMField::parse(&text)
}
