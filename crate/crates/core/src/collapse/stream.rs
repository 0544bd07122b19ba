use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::{Error, Result};

/// The single stochastic source of a run.
///
/// Backed by a counter-based ChaCha8 keystream: `(master_seed, substream)`
/// selects the key and stream id, and draws walk the keystream in order.
/// Ensemble runs use `substream = run index`, so each run's draws are fixed
/// regardless of how runs are scheduled across threads.
///
/// Fair bits are unpacked 64 at a time from one keystream word; a uniform
/// always takes a fresh word. `counter` counts draws of either kind.
#[derive(Debug, Clone)]
pub struct GlobalStream {
    master_seed: u64,
    substream: u64,
    rng: ChaCha8Rng,
    counter: u64,
    bits: u64,
    bits_left: u32,
    cursor: Option<usize>,
}

impl GlobalStream {
    pub fn new(master_seed: u64) -> Self {
        Self::substream(master_seed, 0)
    }

    pub fn substream(master_seed: u64, substream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
        rng.set_stream(substream);
        Self {
            master_seed,
            substream,
            rng,
            counter: 0,
            bits: 0,
            bits_left: 0,
            cursor: None,
        }
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn substream_id(&self) -> u64 {
        self.substream
    }

    /// Number of draws consumed so far.
    pub fn counter(&self) -> u64 {
        self.counter
    }

    pub fn draw_bit(&mut self) -> bool {
        if self.bits_left == 0 {
            self.bits = self.rng.next_u64();
            self.bits_left = 64;
        }
        let bit = self.bits & 1 == 1;
        self.bits >>= 1;
        self.bits_left -= 1;
        self.counter += 1;
        bit
    }

    /// Uniform on `[0, 1)` with 53 bits of resolution.
    pub fn draw_uniform(&mut self) -> f64 {
        self.counter += 1;
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Marks the start of the schedule event at `position`. Positions must
    /// not go backwards: draws belong to events in foliation order.
    pub fn enter_event(&mut self, position: usize) -> Result<()> {
        if let Some(current) = self.cursor {
            if position < current {
                return Err(Error::StreamOrder {
                    current,
                    requested: position,
                });
            }
        }
        self.cursor = Some(position);
        Ok(())
    }
}
