//! Secure beamforming for a two-hop decode-and-forward relay network that
//! carries a secret message and a non-secret message at once.
//!
//! A source talks to a destination through `N` relays while `J` eavesdroppers
//! listen. The source spends `Ps0` on the public stream and `Ps1` on the
//! secret stream; in the second hop the relays re-encode and beamform the
//! public stream with weights `φ` and the secret stream with weights `ψ`.
//! All rates are half-log (two channel uses per message).
//!
//! The solver maximizes the worst-case secrecy rate subject to a total power
//! budget `P_T` and a fixed public rate `R0`:
//!
//! 1. the budget is split on a grid `P_m = m·P_T/M`;
//! 2. for each split, Problem 1 maximizes the secrecy rate with power `P_m`
//!    (bisection over the rate, each step a max-slack semidefinite
//!    relaxation solved by the interior-point kernel in [`cone`]);
//! 3. Problem 2 then serves the public rate with the leftover budget, either
//!    against the destination alone or while every eavesdropper must also
//!    decode the public stream (a small SDP plus a two-variable LP);
//! 4. the largest `m` whose public stage fits the leftover budget wins —
//!    the secrecy rate is nondecreasing in `m`, so the first feasible split
//!    on the way down is optimal.
//!
//! Eavesdropper CSI is either `Perfect` (rank-one channels) or
//! `Statistical` (Rayleigh with known variances, handled through a Jensen
//! surrogate that replaces each channel by its covariance). The [`oracle`]
//! module cross-checks both optimizers with dense grid searches and a
//! Monte-Carlo estimate of the true ergodic objective.

pub mod allocator;
pub mod cone;
pub mod lp2d;
pub mod oracle;
pub mod public;
pub mod rates;
pub mod scenario;
pub mod secret;

pub use allocator::{allocate, sweep, FullSolution, SolveStatus, SweepAxis, SweepRow};
pub use scenario::{db_to_linear, load_scenario, ChannelScenario, EveCsi, SolveConfig};
