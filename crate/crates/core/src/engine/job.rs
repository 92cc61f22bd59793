//! Synthetic workloads: deterministic file contents, map and reduce
//! functions, and the direct reference evaluator.
//!
//! All three functions are built from 64-bit FNV-1a in counter mode.
//! `expand(n_bits, j -> hash_j)` concatenates the little-endian bytes of
//! `hash_0, hash_1, ...` and keeps the first `n_bits` bits, most significant
//! bit of each byte first.
//!
//! * file `n`: `hash_j = FNV(LE64(seed) || LE64(n) || LE64(j))`, `W` bits;
//! * IVA `v(d, n)`: `hash_j = FNV(LE64(d) || LE64(n) || LE64(j) || bytes(file n))`,
//!   `V` bits;
//! * output `u(d)`: `hash_j = FNV(LE64(d) || LE64(j) || bytes(v(d,0) || ... || v(d,N-1)))`,
//!   `U` bits.
//!
//! Indices are zero-based and `bytes(..)` packs a bit string MSB-first,
//! zero-padding the last byte.

use bitvec::prelude::*;

use super::EngineError;

/// Bit strings used throughout the engine.
pub type Bits = BitVec<u8, Msb0>;

pub const FNV_OFFSET_BASIS: u64 = 14695981039346656037;
pub const FNV_PRIME: u64 = 1099511628211;

/// FNV-1a over the concatenation of `parts`.
pub fn fnv1a64(parts: &[&[u8]]) -> u64 {
    let mut h = FNV_OFFSET_BASIS;
    for part in parts {
        for &b in *part {
            h ^= b as u64;
            h = h.wrapping_mul(FNV_PRIME);
        }
    }
    h
}

/// Counter-mode expansion of a block function into `n_bits` bits.
pub fn expand(n_bits: usize, block: impl Fn(u64) -> u64) -> Bits {
    let n_blocks = n_bits.div_ceil(64);
    let mut bytes = Vec::with_capacity(n_blocks * 8);
    for j in 0..n_blocks as u64 {
        bytes.extend_from_slice(&block(j).to_le_bytes());
    }
    let mut bits = Bits::from_vec(bytes);
    bits.truncate(n_bits);
    bits
}

/// Pack bits into bytes, MSB-first, zero-padding the tail.
pub fn pack(bits: &BitSlice<u8, Msb0>) -> Vec<u8> {
    let mut owned: Bits = bits.to_bitvec();
    owned.set_uninitialized(false);
    owned.into_vec()
}

/// Hex rendering of a packed bit string.
pub fn to_hex(bits: &BitSlice<u8, Msb0>) -> String {
    hex::encode(pack(bits))
}

/// A synthetic MapReduce job.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct JobSpec {
    /// `N`.
    pub n_files: usize,
    /// `D`.
    pub d_functions: usize,
    /// File length `W` in bits.
    pub w_bits: usize,
    /// IVA length `V` in bits.
    pub v_bits: usize,
    /// Output length `U` in bits.
    pub u_bits: usize,
    pub seed: u64,
}

impl JobSpec {
    pub fn validate(&self) -> Result<(), EngineError> {
        let fields = [
            ("files", self.n_files),
            ("functions", self.d_functions),
            ("file bits", self.w_bits),
            ("IVA bits", self.v_bits),
            ("output bits", self.u_bits),
        ];
        for (name, v) in fields {
            if v == 0 {
                return Err(EngineError::InvalidJob(format!("{name} must be positive")));
            }
        }
        Ok(())
    }

    /// Contents of file `n`.
    pub fn file(&self, n: usize) -> Bits {
        let (seed, n) = (self.seed.to_le_bytes(), (n as u64).to_le_bytes());
        expand(self.w_bits, |j| fnv1a64(&[&seed, &n, &j.to_le_bytes()]))
    }

    /// Map function: IVA of output function `d` on file `n` given the file's
    /// packed bytes.
    pub fn map(&self, d: usize, n: usize, file_bytes: &[u8]) -> Bits {
        let (d, n) = ((d as u64).to_le_bytes(), (n as u64).to_le_bytes());
        expand(self.v_bits, |j| {
            fnv1a64(&[&d, &n, &j.to_le_bytes(), file_bytes])
        })
    }

    /// Reduce function `h_d` over `v(d, 0), ..., v(d, N-1)` in file order.
    pub fn reduce<'a>(
        &self,
        d: usize,
        ivas: impl IntoIterator<Item = &'a BitSlice<u8, Msb0>>,
    ) -> Bits {
        let mut all = Bits::new();
        for v in ivas {
            all.extend_from_bitslice(v);
        }
        let bytes = pack(&all);
        let d = (d as u64).to_le_bytes();
        expand(self.u_bits, |j| fnv1a64(&[&d, &j.to_le_bytes(), &bytes]))
    }
}

/// Every IVA of a job, computed by the map phase. Row-major in `(d, n)`.
#[derive(Clone, Debug)]
pub struct IvaTable {
    n_files: usize,
    values: Vec<Bits>,
}

impl IvaTable {
    pub fn compute(job: &JobSpec) -> IvaTable {
        let files: Vec<Vec<u8>> = (0..job.n_files).map(|n| pack(&job.file(n))).collect();
        let mut values = Vec::with_capacity(job.n_files * job.d_functions);
        for d in 0..job.d_functions {
            for (n, bytes) in files.iter().enumerate() {
                values.push(job.map(d, n, bytes));
            }
        }
        IvaTable {
            n_files: job.n_files,
            values,
        }
    }

    pub fn get(&self, d: usize, n: usize) -> &BitSlice<u8, Msb0> {
        &self.values[d * self.n_files + n]
    }
}

/// Ground truth: every output `u(d)` computed directly from all files,
/// ignoring placement and shuffling.
pub fn reference_oracle(job: &JobSpec) -> Vec<Bits> {
    let files: Vec<Vec<u8>> = (0..job.n_files).map(|n| pack(&job.file(n))).collect();
    (0..job.d_functions)
        .map(|d| {
            let ivas: Vec<Bits> = files
                .iter()
                .enumerate()
                .map(|(n, f)| job.map(d, n, f))
                .collect();
            job.reduce(d, ivas.iter().map(|v| v.as_bitslice()))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn job(n: usize, d: usize) -> JobSpec {
        JobSpec {
            n_files: n,
            d_functions: d,
            w_bits: 100,
            v_bits: 70,
            u_bits: 96,
            seed: 7,
        }
    }

    #[test]
    fn fnv_reference_vectors() {
        // Published FNV-1a 64 test vectors.
        assert_eq!(fnv1a64(&[b""]), 0xcbf29ce484222325);
        assert_eq!(fnv1a64(&[b"a"]), 0xaf63dc4c8601ec8c);
        assert_eq!(fnv1a64(&[b"foobar"]), 0x85944171f73967e8);
        assert_eq!(fnv1a64(&[b"foo", b"bar"]), fnv1a64(&[b"foobar"]));
    }

    #[test]
    fn expansion_layout() {
        let bits = expand(12, |_| 0x0000_0000_0000_a5f0);
        // LE bytes start f0 a5 ..; the first 12 bits are f0 then a.
        assert_eq!(pack(&bits), vec![0xf0, 0xa0]);
        assert_eq!(bits.len(), 12);
        assert_eq!(expand(130, |j| j).len(), 130);
    }

    #[test]
    fn single_file_single_function() {
        let j = job(1, 1);
        let out = reference_oracle(&j);
        let v = j.map(0, 0, &pack(&j.file(0)));
        assert_eq!(out, vec![j.reduce(0, [v.as_bitslice()])]);
        assert_eq!(out[0].len(), 96);
    }

    #[test]
    fn deterministic_in_seed() {
        assert_eq!(reference_oracle(&job(3, 2)), reference_oracle(&job(3, 2)));
        let mut other = job(3, 2);
        other.seed = 8;
        assert_ne!(reference_oracle(&job(3, 2)), reference_oracle(&other));
    }

    #[test]
    fn one_bit_flip_changes_outputs() {
        let j = job(3, 2);
        let files: Vec<Vec<u8>> = (0..3).map(|n| pack(&j.file(n))).collect();
        let outputs = |files: &[Vec<u8>]| -> Vec<Bits> {
            (0..2)
                .map(|d| {
                    let ivas: Vec<Bits> = files
                        .iter()
                        .enumerate()
                        .map(|(n, f)| j.map(d, n, f))
                        .collect();
                    j.reduce(d, ivas.iter().map(|v| v.as_bitslice()))
                })
                .collect()
        };
        let base = outputs(&files);
        assert_eq!(base, reference_oracle(&j));
        for byte in 0..files[1].len() {
            for bit in 0..8 {
                let mut flipped = files.clone();
                flipped[1][byte] ^= 1 << bit;
                let out = outputs(&flipped);
                assert!(out.iter().zip(&base).all(|(a, b)| a != b));
            }
        }
    }

    #[test]
    fn table_matches_direct_map() {
        let j = job(4, 3);
        let t = IvaTable::compute(&j);
        assert_eq!(t.get(2, 3), j.map(2, 3, &pack(&j.file(3))).as_bitslice());
    }

    #[test]
    fn rejects_zero_fields() {
        let mut j = job(1, 1);
        j.v_bits = 0;
        assert!(j.validate().is_err());
    }
}
