//! JSON files for functions, spectra and atomic decompositions.
//!
//! Complex numbers are stored as `[re, im]` pairs in rank order.

use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, VilenkinError};
use crate::function::FiniteFunction;
use crate::group::{BaseSequence, GroupPoint, IntervalSpec};
use crate::hardy::{atomic_assemble, Assembly, AtomSpec};
use crate::transform::Spectrum;

#[derive(Serialize, Deserialize)]
struct FunctionFile {
    bases: Vec<usize>,
    values: Vec<[f64; 2]>,
}

#[derive(Serialize, Deserialize)]
struct SpectrumFile {
    bases: Vec<usize>,
    coeffs: Vec<[f64; 2]>,
}

fn pairs(values: &[Complex64]) -> Vec<[f64; 2]> {
    values.iter().map(|c| [c.re, c.im]).collect()
}

fn complexes(pairs: &[[f64; 2]]) -> Vec<Complex64> {
    pairs.iter().map(|&[re, im]| Complex64::new(re, im)).collect()
}

pub fn function_to_json(f: &FiniteFunction) -> Result<String> {
    Ok(serde_json::to_string(&FunctionFile {
        bases: f.base().bases().to_vec(),
        values: pairs(f.values()),
    })?)
}

pub fn function_from_json(text: &str, ceiling: usize) -> Result<FiniteFunction> {
    let file: FunctionFile = serde_json::from_str(text)?;
    let base = BaseSequence::with_ceiling(file.bases, ceiling)?;
    FiniteFunction::new(&base, complexes(&file.values))
}

pub fn write_function(path: &Path, f: &FiniteFunction) -> Result<()> {
    Ok(fs::write(path, function_to_json(f)?)?)
}

pub fn read_function(path: &Path, ceiling: usize) -> Result<FiniteFunction> {
    function_from_json(&fs::read_to_string(path)?, ceiling)
}

pub fn spectrum_to_json(s: &Spectrum) -> Result<String> {
    Ok(serde_json::to_string(&SpectrumFile {
        bases: s.base().bases().to_vec(),
        coeffs: pairs(s.coeffs()),
    })?)
}

pub fn spectrum_from_json(text: &str, ceiling: usize) -> Result<Spectrum> {
    let file: SpectrumFile = serde_json::from_str(text)?;
    let base = BaseSequence::with_ceiling(file.bases, ceiling)?;
    Spectrum::new(&base, complexes(&file.coeffs))
}

pub fn write_spectrum(path: &Path, s: &Spectrum) -> Result<()> {
    Ok(fs::write(path, spectrum_to_json(s)?)?)
}

pub fn read_spectrum(path: &Path, ceiling: usize) -> Result<Spectrum> {
    spectrum_from_json(&fs::read_to_string(path)?, ceiling)
}

#[derive(Serialize, Deserialize)]
struct IntervalEntry {
    depth: usize,
    anchor: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct AtomEntry {
    interval: IntervalEntry,
    mu: f64,
    values_file: PathBuf,
}

#[derive(Serialize, Deserialize)]
struct DecompositionFile {
    p: f64,
    atoms: Vec<AtomEntry>,
}

/// A list of `(mu_k, a_k)` read from a decomposition file.
#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition {
    pub p: f64,
    pub coeffs: Vec<f64>,
    pub atoms: Vec<AtomSpec>,
}

impl Decomposition {
    pub fn assemble(&self, base: &BaseSequence) -> Result<Assembly> {
        atomic_assemble(base, self.p, &self.coeffs, &self.atoms)
    }
}

/// Reads a decomposition. Each `values_file` is a function file, resolved
/// against the directory of `path` when relative.
pub fn read_decomposition(path: &Path, ceiling: usize) -> Result<Decomposition> {
    let file: DecompositionFile = serde_json::from_str(&fs::read_to_string(path)?)?;
    let dir = path.parent().unwrap_or(Path::new("."));
    let mut coeffs = Vec::with_capacity(file.atoms.len());
    let mut atoms = Vec::with_capacity(file.atoms.len());
    for entry in file.atoms {
        let function = read_function(&dir.join(&entry.values_file), ceiling)?;
        let anchor = GroupPoint::new(function.base(), entry.interval.anchor)?;
        let support = IntervalSpec::new(entry.interval.depth, anchor)?;
        atoms.push(AtomSpec::new(support, file.p, function)?);
        coeffs.push(entry.mu);
    }
    Ok(Decomposition {
        p: file.p,
        coeffs,
        atoms,
    })
}

/// Writes `decomposition` to `path`, with atom `i` stored next to it as
/// `<stem>.atom<i>.json`.
pub fn write_decomposition(path: &Path, decomposition: &Decomposition) -> Result<()> {
    if decomposition.coeffs.len() != decomposition.atoms.len() {
        return Err(VilenkinError::LengthMismatch {
            expected: decomposition.atoms.len(),
            got: decomposition.coeffs.len(),
        });
    }
    let dir = path.parent().unwrap_or(Path::new("."));
    let stem = path
        .file_stem()
        .and_then(|s| s.to_str())
        .ok_or_else(|| VilenkinError::Domain(format!("bad decomposition path {}", path.display())))?;
    let mut entries = Vec::with_capacity(decomposition.atoms.len());
    for (i, (mu, atom)) in decomposition.coeffs.iter().zip(&decomposition.atoms).enumerate() {
        let name = PathBuf::from(format!("{stem}.atom{i}.json"));
        write_function(&dir.join(&name), &atom.function)?;
        entries.push(AtomEntry {
            interval: IntervalEntry {
                depth: atom.support.depth(),
                anchor: atom.support.anchor().digits().to_vec(),
            },
            mu: *mu,
            values_file: name,
        });
    }
    let file = DecompositionFile {
        p: decomposition.p,
        atoms: entries,
    };
    Ok(fs::write(path, serde_json::to_string_pretty(&file)?)?)
}
