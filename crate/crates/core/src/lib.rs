//! A tabular reinforcement-learning laboratory for auxiliary rewards that
//! penalize side effects by valuing hypothetical future tasks.
//!
//! The crate bundles:
//! - exact MDP machinery ([`mdp`]): value iteration, policy evaluation,
//!   goal-conditioned values and goal-distance distributions;
//! - a gridworld suite plus toy chain MDPs ([`env`]) with side-effect,
//!   interference, and offsetting metrics;
//! - the future-task auxiliary reward in exact and sampled forms, with and
//!   without a baseline policy ([`future_task`]);
//! - baseline-policy tracking in initial and stepwise modes, learned noop
//!   models, and inaction rollouts ([`baseline`]);
//! - tabular Q-learning agents and the beta grid search ([`agent`]);
//! - a goal-conditioned value approximator with hand-derived gradients
//!   ([`uvfa`]);
//! - interference-incentive detection on no-reward MDPs ([`interference`]);
//! - an experiment harness with reproducible seed streams and CSV/JSON
//!   reporting ([`harness`]).
//!
//! Heavy inner loops (per-goal table builds, policy audits, seed fan-out)
//! run data-parallel through rayon when the default `parallel` feature is
//! enabled; disabling it falls back to sequential execution with identical
//! results.

pub mod agent;
pub mod baseline;
pub mod env;
pub mod future_task;
pub mod harness;
pub mod interference;
pub mod mdp;
pub mod par;
pub mod uvfa;

pub use mdp::{ActionId, MdpError, Policy, StateId, TabularMdp, ValueTable};
