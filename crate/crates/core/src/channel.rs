//! PPM framing over the pure-loss bosonic channel, simulated at the level of
//! detection statistics.
//!
//! A coherent pulse of mean photon number `alpha^2` split by a beam splitter
//! of transmissivity `eta` leaves a product of coherent states with means
//! `eta * alpha^2` (Bob) and `(1 - eta) * alpha^2` (Eve), so the two
//! click/no-click outcomes are independent Bernoulli draws. There are no dark
//! counts: a detection always reports the position the pulse was sent in.

use rand::Rng;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChannelParams {
    eta: f64,
    pulse_energy: f64,
    frame_len: u32,
    erasure: f64,
    eve_miss: f64,
}

impl ChannelParams {
    pub fn new(eta: f64, pulse_energy: f64, frame_len: u32) -> Result<Self> {
        if !(eta > 0.5 && eta < 1.0) {
            return Err(Error::usage(format!("transmissivity {eta} outside (0.5, 1)")));
        }
        if !(pulse_energy >= 0.0 && pulse_energy.is_finite()) {
            return Err(Error::usage(format!("pulse energy {pulse_energy} must be >= 0")));
        }
        if frame_len == 0 {
            return Err(Error::usage("frame length must be positive"));
        }
        Ok(ChannelParams {
            eta,
            pulse_energy,
            frame_len,
            erasure: (-eta * pulse_energy).exp(),
            eve_miss: (-(1.0 - eta) * pulse_energy).exp(),
        })
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// Mean photon number `alpha^2` of the single pulse in each frame.
    pub fn pulse_energy(&self) -> f64 {
        self.pulse_energy
    }

    pub fn frame_len(&self) -> u32 {
        self.frame_len
    }

    /// Average photons per channel use, `alpha^2 / b`.
    pub fn mean_photons_per_use(&self) -> f64 {
        self.pulse_energy / self.frame_len as f64
    }
}

/// Bob's output for one frame: the pulse position, or `None` for an erasure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Frame(pub Option<u32>);

/// What a classical direct-detection eavesdropper sees in one frame.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct EveRecord(pub Option<u32>);

/// `exp(-eta * alpha^2)`: probability Bob sees nothing in a frame.
pub fn erasure_probability(p: &ChannelParams) -> f64 {
    p.erasure
}

/// `exp(-(1 - eta) * alpha^2)`: probability the eavesdropper sees nothing.
pub fn eve_miss_probability(p: &ChannelParams) -> f64 {
    p.eve_miss
}

/// Sends one pulse at `position` (1-based) and draws both detector outcomes.
pub fn transmit_frame<R: Rng + ?Sized>(
    position: u32,
    p: &ChannelParams,
    rng: &mut R,
) -> Result<(Frame, EveRecord)> {
    if position == 0 || position > p.frame_len {
        return Err(Error::usage(format!(
            "pulse position {position} outside 1..={}",
            p.frame_len
        )));
    }
    let bob = rng.gen::<f64>() >= erasure_probability(p);
    let eve = rng.gen::<f64>() >= eve_miss_probability(p);
    Ok((
        Frame(bob.then_some(position)),
        EveRecord(eve.then_some(position)),
    ))
}

/// Symbol `v` of GF(b) goes to pulse position `v + 1`.
pub fn modulate(symbol: u16, frame_len: u32) -> Result<u32> {
    let pos = symbol as u32 + 1;
    if pos > frame_len {
        return Err(Error::usage(format!(
            "symbol {symbol} does not fit a frame of {frame_len}"
        )));
    }
    Ok(pos)
}

pub fn demodulate(position: u32, frame_len: u32) -> Result<u16> {
    if position == 0 || position > frame_len {
        return Err(Error::usage(format!(
            "pulse position {position} outside 1..={frame_len}"
        )));
    }
    Ok((position - 1) as u16)
}

/// Channel uses consumed by `n` frames.
pub fn channel_uses(n: usize, frame_len: u32) -> u64 {
    n as u64 * frame_len as u64
}
