//! Uncoded placement and one-shot XOR delivery driven by a PDA.
//!
//! Packet `j` of every file is cached by user `k` iff cell `(j, k)` is a
//! star. At time slot `s` the server broadcasts the XOR of every packet
//! requested at a cell holding `s`; each user recovers its missing packets
//! from those messages and its cache.

use std::collections::BTreeMap;
use std::io::{self, Write};

use num_rational::Ratio;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::array::{Cell, PdaArray};
use crate::verify::symbol_occurrences;

pub const DEFAULT_PACKET_BYTES: usize = 64;
pub const DEFAULT_DEMAND_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimError {
    #[error("library has {library} packets per file but the array has {rows} rows")]
    DimensionMismatch { library: usize, rows: usize },
    #[error("bad demand: {0}")]
    BadDemand(String),
    #[error("user {} cannot decode packet {}", .user + 1, .packet + 1)]
    DecodeFailure { user: usize, packet: usize },
    #[error("{count} demand vectors exceed the budget of {budget}")]
    BudgetExceeded { count: u128, budget: u64 },
}

/// `N` files of `F` packets each, filled from a seeded ChaCha8 stream.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FileLibrary {
    files: usize,
    packets: usize,
    packet_bytes: usize,
    seed: u64,
    data: Vec<u8>,
}

impl FileLibrary {
    pub fn new(files: usize, packets: usize, packet_bytes: usize, seed: u64) -> Self {
        let mut data = vec![0u8; files * packets * packet_bytes];
        ChaCha8Rng::seed_from_u64(seed).fill_bytes(&mut data);
        Self { files, packets, packet_bytes, seed, data }
    }

    pub fn files(&self) -> usize {
        self.files
    }

    pub fn packets(&self) -> usize {
        self.packets
    }

    pub fn packet_bytes(&self) -> usize {
        self.packet_bytes
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Packet `j` of file `n`, both 0-based.
    pub fn packet(&self, n: usize, j: usize) -> &[u8] {
        let start = (n * self.packets + j) * self.packet_bytes;
        &self.data[start..start + self.packet_bytes]
    }

    pub fn file(&self, n: usize) -> &[u8] {
        let len = self.packets * self.packet_bytes;
        &self.data[n * len..(n + 1) * len]
    }

    pub fn file_bytes(&self) -> usize {
        self.packets * self.packet_bytes
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UserCache {
    pub user: usize,
    /// Payloads keyed by `(file, packet)`, 0-based.
    pub cached: BTreeMap<(usize, usize), Vec<u8>>,
}

impl UserCache {
    pub fn get(&self, file: usize, packet: usize) -> Option<&[u8]> {
        self.cached.get(&(file, packet)).map(Vec::as_slice)
    }

    pub fn len(&self) -> usize {
        self.cached.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cached.is_empty()
    }
}

/// Fills every user's cache from the star pattern.
pub fn place(pda: &PdaArray, library: &FileLibrary) -> Result<Vec<UserCache>, SimError> {
    if library.packets() != pda.rows() {
        return Err(SimError::DimensionMismatch { library: library.packets(), rows: pda.rows() });
    }
    Ok((0..pda.cols())
        .map(|k| {
            let mut cached = BTreeMap::new();
            for j in (0..pda.rows()).filter(|&j| pda.is_star(j, k)) {
                for n in 0..library.files() {
                    cached.insert((n, j), library.packet(n, j).to_vec());
                }
            }
            UserCache { user: k, cached }
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Message {
    pub symbol: u32,
    /// Contributing `(row, column)` cells, 0-based, row-major.
    pub cells: Vec<(usize, usize)>,
    pub payload: Vec<u8>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeliveryTranscript {
    /// 1-based file index requested by each user.
    pub demand: Vec<usize>,
    pub seed: u64,
    pub messages: Vec<Message>,
    pub decoded: Vec<bool>,
    /// `S / F`.
    pub load: Ratio<u64>,
    pub bytes_sent: u64,
    pub file_bytes: u64,
}

#[derive(Serialize)]
struct MessageRecord<'a> {
    symbol: u32,
    cells: Vec<[usize; 2]>,
    sha256: &'a str,
}

impl DeliveryTranscript {
    pub fn all_decoded(&self) -> bool {
        self.decoded.iter().all(|&d| d)
    }

    /// Transmitted bytes over the size of one file.
    pub fn measured_load(&self) -> Ratio<u64> {
        Ratio::new(self.bytes_sent, self.file_bytes)
    }

    /// One JSON object per message: symbol, 1-based cells, payload digest.
    pub fn write_jsonl<W: Write>(&self, mut out: W) -> io::Result<()> {
        for m in &self.messages {
            let digest = hex::encode(Sha256::digest(&m.payload));
            let record = MessageRecord {
                symbol: m.symbol,
                cells: m.cells.iter().map(|&(j, k)| [j + 1, k + 1]).collect(),
                sha256: &digest,
            };
            serde_json::to_writer(&mut out, &record)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }
}

fn xor_into(acc: &mut [u8], other: &[u8]) {
    for (a, b) in acc.iter_mut().zip(other) {
        *a ^= b;
    }
}

/// Runs one delivery round for `demand` (1-based file indices, one per user)
/// and decodes at every user.
pub fn deliver(
    pda: &PdaArray,
    library: &FileLibrary,
    caches: &[UserCache],
    demand: &[usize],
) -> Result<DeliveryTranscript, SimError> {
    if library.packets() != pda.rows() {
        return Err(SimError::DimensionMismatch { library: library.packets(), rows: pda.rows() });
    }
    if demand.len() != pda.cols() || caches.len() != pda.cols() {
        return Err(SimError::BadDemand(format!(
            "{} demands and {} caches for {} users",
            demand.len(),
            caches.len(),
            pda.cols()
        )));
    }
    if let Some(&d) = demand.iter().find(|&&d| d == 0 || d > library.files()) {
        return Err(SimError::BadDemand(format!("file {d} is outside 1..={}", library.files())));
    }
    let want = |k: usize| demand[k] - 1;

    let symbols = pda.max_symbol() as usize;
    let messages: Vec<Message> = symbol_occurrences(pda, symbols)
        .into_iter()
        .enumerate()
        .map(|(idx, cells)| {
            let mut payload = vec![0u8; library.packet_bytes()];
            for &(j, k) in &cells {
                xor_into(&mut payload, library.packet(want(k), j));
            }
            Message { symbol: idx as u32 + 1, cells, payload }
        })
        .collect();

    let mut decoded = Vec::with_capacity(pda.cols());
    for (k, cache) in caches.iter().enumerate() {
        let mut file = Vec::with_capacity(library.file_bytes());
        for j in 0..pda.rows() {
            match pda.cell(j, k) {
                Cell::Star => {
                    let p = cache.get(want(k), j).ok_or(SimError::DecodeFailure { user: k, packet: j })?;
                    file.extend_from_slice(p);
                }
                Cell::Symbol(s) => {
                    let msg = &messages[s as usize - 1];
                    let mut p = msg.payload.clone();
                    for &(j2, k2) in msg.cells.iter().filter(|&&(_, k2)| k2 != k) {
                        let known = cache
                            .get(want(k2), j2)
                            .ok_or(SimError::DecodeFailure { user: k, packet: j })?;
                        xor_into(&mut p, known);
                    }
                    file.extend_from_slice(&p);
                }
            }
        }
        decoded.push(file == library.file(want(k)));
    }

    let bytes_sent = (messages.len() * library.packet_bytes()) as u64;
    Ok(DeliveryTranscript {
        demand: demand.to_vec(),
        seed: library.seed(),
        messages,
        decoded,
        load: Ratio::new(symbols as u64, pda.rows() as u64),
        bytes_sent,
        file_bytes: library.file_bytes() as u64,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepMode {
    /// Every vector in `[1:N]^K`, refused above `budget` vectors.
    Exhaustive { budget: u64 },
    Sampled { count: usize, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepSummary {
    pub demands: u64,
    /// Demands in which every user recovered its file bit-exactly.
    pub all_decoded: u64,
    pub max_load: Ratio<u64>,
    pub mean_load: Ratio<u64>,
}

impl SweepSummary {
    pub fn all_ok(&self) -> bool {
        self.all_decoded == self.demands
    }
}

/// `index`-th vector of `[1:files]^users`, first user most significant.
fn demand_at(mut index: u64, files: usize, users: usize) -> Vec<usize> {
    let mut d = vec![0; users];
    for slot in d.iter_mut().rev() {
        *slot = (index % files as u64) as usize + 1;
        index /= files as u64;
    }
    d
}

pub fn sweep_demands(
    pda: &PdaArray,
    library: &FileLibrary,
    caches: &[UserCache],
    mode: SweepMode,
) -> Result<SweepSummary, SimError> {
    let (files, users) = (library.files(), pda.cols());
    let demands: Vec<Vec<usize>> = match mode {
        SweepMode::Exhaustive { budget } => {
            let count = (files as u128).checked_pow(users as u32).unwrap_or(u128::MAX);
            if count > budget as u128 {
                return Err(SimError::BudgetExceeded { count, budget });
            }
            (0..count as u64).map(|i| demand_at(i, files, users)).collect()
        }
        SweepMode::Sampled { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..count)
                .map(|_| (0..users).map(|_| rng.gen_range(1..=files)).collect())
                .collect()
        }
    };
    let results: Vec<(bool, u64)> = demands
        .par_iter()
        .map(|d| deliver(pda, library, caches, d).map(|t| (t.all_decoded(), t.bytes_sent)))
        .collect::<Result<_, _>>()?;

    let file_bytes = library.file_bytes() as u64;
    let demands = results.len() as u64;
    let max_bytes = results.iter().map(|r| r.1).max().unwrap_or(0);
    let total: u64 = results.iter().map(|r| r.1).sum();
    Ok(SweepSummary {
        demands,
        all_decoded: results.iter().filter(|r| r.0).count() as u64,
        max_load: Ratio::new(max_bytes, file_bytes),
        mean_load: Ratio::new(total, file_bytes * demands.max(1)),
    })
}
