//! Cycle structure of linear permutation maps over `Z/p^k`.
//!
//! The crate has two halves. The algebraic side computes orders of
//! polynomials over `Z/p^k` from root data in Galois rings `GR(p^k, d)`,
//! lifting roots with Newton iteration. The dynamical side enumerates the
//! functional graph of `x -> Mx` exactly and checks the algebraic
//! predictions against it. The generalized Arnold Cat map sits on top.
//!
//! Everything here is `no_std` (with `alloc`) and pure: values are immutable
//! and can be shared across threads freely.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod arith;
pub mod catmap;
pub mod dynamics;
mod error;
pub mod factor;
pub mod fp;
pub mod order;
pub mod poly;
pub mod ring;

pub use error::{Error, Result};
pub use ring::{GaloisRing, Modulus, RingElement, Threshold, Valuation};
