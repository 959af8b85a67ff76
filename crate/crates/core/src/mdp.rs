//! Enumerated-state MDP representation and exact solvers.
//!
//! Everything downstream (environments, auxiliary rewards, agents, audits)
//! consumes [`TabularMdp`]. Transitions are stored as the raw world dynamics;
//! episode termination is a predicate layered on top, so hypothetical
//! rollouts for future tasks can keep acting from states where the current
//! task has ended. States flagged terminal are absorbing at the episodic
//! level: simulators never step out of them and solvers never bootstrap
//! through them.

use std::collections::VecDeque;

use thiserror::Error;

/// Sweep cap for all fixed-point solvers. Exceeding it is an error, not
/// silent truncation.
pub const ITERATION_CAP: usize = 10_000;

/// Tolerance for probability-sum invariants.
pub const PROB_TOL: f64 = 1e-12;

/// Index of a state in the enumerated state set.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct StateId(pub usize);

impl StateId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

/// Index of an action in the enumerated action set.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct ActionId(pub usize);

impl ActionId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Debug, Error)]
pub enum MdpError {
    #[error("invalid MDP: {0}")]
    Invalid(String),
    #[error("{solver} did not converge within {cap} sweeps (residual {residual:.3e})")]
    NonConvergence {
        solver: &'static str,
        cap: usize,
        residual: f64,
    },
}

/// A probability distribution over successor states, stored sparsely.
pub type SuccessorDist = Vec<(StateId, f64)>;

/// Finite MDP `(S, A, r, p, gamma, s0)` with a terminal predicate.
#[derive(Clone, Debug)]
pub struct TabularMdp {
    n_actions: usize,
    /// `rows[s][a]` is the successor distribution of the world dynamics.
    rows: Vec<Vec<SuccessorDist>>,
    /// State-based task reward, received on arrival (and at `s0` at T=0).
    pub state_reward: Vec<f64>,
    /// Optional event reward paid on taking action `a` in state `s`
    /// (coin pickups, take-the-vase-off-the-belt). Indexed `[s][a]`.
    pub transition_bonus: Option<Vec<Vec<f64>>>,
    pub gamma: f64,
    pub initial_state: StateId,
    terminal: Vec<bool>,
    pub state_labels: Vec<String>,
    pub action_labels: Vec<String>,
}

impl TabularMdp {
    pub fn new(
        rows: Vec<Vec<SuccessorDist>>,
        state_reward: Vec<f64>,
        gamma: f64,
        initial_state: StateId,
        terminal: Vec<bool>,
    ) -> Result<Self, MdpError> {
        let n_actions = rows.first().map(|r| r.len()).unwrap_or(0);
        let mdp = Self {
            n_actions,
            rows,
            state_reward,
            transition_bonus: None,
            gamma,
            initial_state,
            terminal,
            state_labels: Vec::new(),
            action_labels: Vec::new(),
        };
        mdp.validate()?;
        Ok(mdp)
    }

    pub fn with_labels(mut self, states: Vec<String>, actions: Vec<String>) -> Self {
        self.state_labels = states;
        self.action_labels = actions;
        self
    }

    pub fn with_transition_bonus(mut self, bonus: Vec<Vec<f64>>) -> Self {
        self.transition_bonus = Some(bonus);
        self
    }

    pub fn validate(&self) -> Result<(), MdpError> {
        if !(self.gamma > 0.0 && self.gamma < 1.0) {
            return Err(MdpError::Invalid(format!(
                "gamma must lie strictly inside (0,1), got {}",
                self.gamma
            )));
        }
        let n = self.n_states();
        if self.initial_state.index() >= n {
            return Err(MdpError::Invalid("initial state out of range".into()));
        }
        if self.state_reward.len() != n || self.terminal.len() != n {
            return Err(MdpError::Invalid("field lengths disagree".into()));
        }
        for (s, per_action) in self.rows.iter().enumerate() {
            if per_action.len() != self.n_actions {
                return Err(MdpError::Invalid(format!(
                    "state {s} has {} actions, expected {}",
                    per_action.len(),
                    self.n_actions
                )));
            }
            for (a, dist) in per_action.iter().enumerate() {
                let mut sum = 0.0;
                for &(succ, p) in dist {
                    if p < 0.0 {
                        return Err(MdpError::Invalid(format!(
                            "negative probability at state {s} action {a}"
                        )));
                    }
                    if succ.index() >= n {
                        return Err(MdpError::Invalid(format!(
                            "successor out of range at state {s} action {a}"
                        )));
                    }
                    sum += p;
                }
                if (sum - 1.0).abs() > PROB_TOL {
                    return Err(MdpError::Invalid(format!(
                        "distribution at state {s} action {a} sums to {sum}, not 1"
                    )));
                }
            }
        }
        Ok(())
    }

    #[inline]
    pub fn n_states(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn n_actions(&self) -> usize {
        self.n_actions
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> {
        (0..self.n_states()).map(StateId)
    }

    pub fn actions(&self) -> impl Iterator<Item = ActionId> {
        (0..self.n_actions()).map(ActionId)
    }

    /// Raw world dynamics. Live even at terminal-flagged states, so future
    /// tasks can start where the current task left off.
    #[inline]
    pub fn dynamics(&self, s: StateId, a: ActionId) -> &[(StateId, f64)] {
        &self.rows[s.index()][a.index()]
    }

    /// Episodic view: terminal states are absorbing under every action.
    pub fn episodic_successors(&self, s: StateId, a: ActionId) -> SuccessorDist {
        if self.is_terminal(s) {
            vec![(s, 1.0)]
        } else {
            self.rows[s.index()][a.index()].clone()
        }
    }

    #[inline]
    pub fn is_terminal(&self, s: StateId) -> bool {
        self.terminal[s.index()]
    }

    pub fn terminal_flags(&self) -> &[bool] {
        &self.terminal
    }

    /// Same dynamics with every terminal flag cleared; the process never
    /// terminates. Interference audits sum over an infinite horizon.
    pub fn without_termination(&self) -> TabularMdp {
        let mut m = self.clone();
        m.terminal = vec![false; self.n_states()];
        m
    }

    /// Same MDP with the reward function zeroed (the no-reward MDP).
    pub fn with_zero_reward(&self) -> TabularMdp {
        let mut m = self.clone();
        m.state_reward = vec![0.0; self.n_states()];
        m.transition_bonus = None;
        m
    }

    pub fn is_deterministic(&self) -> bool {
        self.rows
            .iter()
            .flatten()
            .all(|dist| dist.len() == 1 && (dist[0].1 - 1.0).abs() <= PROB_TOL)
    }

    /// Deterministic successor of `(s, a)` under the world dynamics.
    /// Panics if the MDP is stochastic at `(s, a)`.
    pub fn deterministic_step(&self, s: StateId, a: ActionId) -> StateId {
        let dist = self.dynamics(s, a);
        debug_assert!(dist.len() == 1);
        dist[0].0
    }

    pub fn event_bonus(&self, s: StateId, a: ActionId) -> f64 {
        self.transition_bonus
            .as_ref()
            .map(|b| b[s.index()][a.index()])
            .unwrap_or(0.0)
    }

    pub fn state_label(&self, s: StateId) -> &str {
        self.state_labels
            .get(s.index())
            .map(String::as_str)
            .unwrap_or("")
    }

    pub fn state_id_by_label(&self, label: &str) -> Option<StateId> {
        self.state_labels.iter().position(|l| l == label).map(StateId)
    }
}

/// A stationary policy: one distribution over actions per state.
#[derive(Clone, Debug)]
pub struct Policy {
    probs: Vec<Vec<f64>>,
}

impl Policy {
    pub fn new(probs: Vec<Vec<f64>>) -> Result<Self, MdpError> {
        for (s, row) in probs.iter().enumerate() {
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > PROB_TOL || row.iter().any(|&p| p < 0.0) {
                return Err(MdpError::Invalid(format!(
                    "policy distribution at state {s} sums to {sum}"
                )));
            }
        }
        Ok(Self { probs })
    }

    pub fn deterministic(actions: &[ActionId], n_actions: usize) -> Self {
        let probs = actions
            .iter()
            .map(|a| {
                let mut row = vec![0.0; n_actions];
                row[a.index()] = 1.0;
                row
            })
            .collect();
        Self { probs }
    }

    pub fn uniform(n_states: usize, n_actions: usize) -> Self {
        Self {
            probs: vec![vec![1.0 / n_actions as f64; n_actions]; n_states],
        }
    }

    pub fn action_probs(&self, s: StateId) -> &[f64] {
        &self.probs[s.index()]
    }

    /// The single action taken in `s` when the policy is deterministic there.
    pub fn action(&self, s: StateId) -> ActionId {
        let row = &self.probs[s.index()];
        let (a, _) = row
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.partial_cmp(y.1).unwrap())
            .unwrap();
        ActionId(a)
    }
}

/// State-indexed value function.
#[derive(Clone, Debug, PartialEq)]
pub struct ValueTable {
    pub values: Vec<f64>,
}

impl ValueTable {
    pub fn zeros(n: usize) -> Self {
        Self {
            values: vec![0.0; n],
        }
    }

    #[inline]
    pub fn get(&self, s: StateId) -> f64 {
        self.values[s.index()]
    }
}

/// Distribution over the number of steps the goal policy needs to reach its
/// goal. Probabilities may sum to less than one; the deficit is the chance
/// of never arriving.
#[derive(Clone, Debug)]
pub struct DistanceDist {
    /// `probs[n]` = P(N = n), dense up to the horizon used.
    pub probs: Vec<f64>,
}

impl DistanceDist {
    pub fn point_mass(n: usize) -> Self {
        let mut probs = vec![0.0; n + 1];
        probs[n] = 1.0;
        Self { probs }
    }

    pub fn unreachable() -> Self {
        Self { probs: Vec::new() }
    }

    pub fn total_mass(&self) -> f64 {
        self.probs.iter().sum()
    }

    pub fn deficit(&self) -> f64 {
        (1.0 - self.total_mass()).max(0.0)
    }

    /// The unique `n` carrying all mass, if this is a point distribution.
    pub fn as_point_mass(&self) -> Option<usize> {
        let mut found = None;
        for (n, &p) in self.probs.iter().enumerate() {
            if p > PROB_TOL {
                if (p - 1.0).abs() > 1e-9 || found.is_some() {
                    return None;
                }
                found = Some(n);
            }
        }
        found
    }

    /// E[gamma^N], counting never-arriving trajectories as zero.
    pub fn expected_discount(&self, gamma: f64) -> f64 {
        self.probs
            .iter()
            .enumerate()
            .map(|(n, &p)| p * gamma.powi(n as i32))
            .sum()
    }
}

/// Per-state goal-distance distributions for one goal.
#[derive(Clone, Debug)]
pub struct GoalDistanceDistribution {
    pub goal: StateId,
    pub per_state: Vec<DistanceDist>,
}

/// Closure of states reachable from `initial_state` under any action
/// sequence of the world dynamics.
pub fn reachable_states(mdp: &TabularMdp) -> Vec<StateId> {
    let mut seen = vec![false; mdp.n_states()];
    let mut order = Vec::new();
    let mut queue = VecDeque::new();
    seen[mdp.initial_state.index()] = true;
    queue.push_back(mdp.initial_state);
    while let Some(s) = queue.pop_front() {
        order.push(s);
        for a in mdp.actions() {
            for &(succ, p) in mdp.dynamics(s, a) {
                if p > 0.0 && !seen[succ.index()] {
                    seen[succ.index()] = true;
                    queue.push_back(succ);
                }
            }
        }
    }
    order
}

fn greedy_from_values(
    mdp: &TabularMdp,
    reward_fn: &dyn Fn(StateId) -> f64,
    values: &[f64],
) -> Policy {
    let mut actions = Vec::with_capacity(mdp.n_states());
    for s in mdp.states() {
        let mut best = (ActionId(0), f64::NEG_INFINITY);
        for a in mdp.actions() {
            let q: f64 = mdp
                .dynamics(s, a)
                .iter()
                .map(|&(succ, p)| p * values[succ.index()])
                .sum::<f64>()
                + mdp.event_bonus(s, a);
            // strict > keeps the lowest action index on ties
            if q > best.1 + 1e-15 {
                best = (a, q);
            }
        }
        let _ = reward_fn;
        actions.push(best.0);
    }
    Policy::deterministic(&actions, mdp.n_actions())
}

/// Bellman optimality iteration for the episodic task
/// `V(s) = r(s) + gamma * max_a E[bonus + V(s')]`, with `V(s) = r(s)` at
/// terminal states. Greedy ties break toward the lowest action index.
pub fn value_iteration(
    mdp: &TabularMdp,
    reward_fn: impl Fn(StateId) -> f64,
    tol: f64,
) -> Result<(ValueTable, Policy), MdpError> {
    assert!(tol > 0.0);
    let n = mdp.n_states();
    let mut values = vec![0.0; n];
    let mut residual = f64::INFINITY;
    for _ in 0..ITERATION_CAP {
        residual = 0.0;
        let mut next = vec![0.0; n];
        for s in mdp.states() {
            let r = reward_fn(s);
            let v = if mdp.is_terminal(s) {
                r
            } else {
                let best = mdp
                    .actions()
                    .map(|a| {
                        mdp.dynamics(s, a)
                            .iter()
                            .map(|&(succ, p)| p * values[succ.index()])
                            .sum::<f64>()
                            + mdp.event_bonus(s, a)
                    })
                    .fold(f64::NEG_INFINITY, f64::max);
                r + mdp.gamma * best
            };
            residual = residual.max((v - values[s.index()]).abs());
            next[s.index()] = v;
        }
        values = next;
        if residual < tol {
            let policy = greedy_from_values(mdp, &reward_fn, &values);
            return Ok((ValueTable { values }, policy));
        }
    }
    Err(MdpError::NonConvergence {
        solver: "value_iteration",
        cap: ITERATION_CAP,
        residual,
    })
}

/// Fixed point of the policy-evaluation operator for `policy`, same reward
/// conventions as [`value_iteration`].
pub fn policy_evaluation(
    mdp: &TabularMdp,
    policy: &Policy,
    reward_fn: impl Fn(StateId) -> f64,
    tol: f64,
) -> Result<ValueTable, MdpError> {
    assert!(tol > 0.0);
    let n = mdp.n_states();
    let mut values = vec![0.0; n];
    let mut residual = f64::INFINITY;
    for _ in 0..ITERATION_CAP {
        residual = 0.0;
        let mut next = vec![0.0; n];
        for s in mdp.states() {
            let r = reward_fn(s);
            let v = if mdp.is_terminal(s) {
                r
            } else {
                let mut acc = 0.0;
                for (a_idx, &pa) in policy.action_probs(s).iter().enumerate() {
                    if pa == 0.0 {
                        continue;
                    }
                    let a = ActionId(a_idx);
                    let q: f64 = mdp
                        .dynamics(s, a)
                        .iter()
                        .map(|&(succ, p)| p * values[succ.index()])
                        .sum::<f64>()
                        + mdp.event_bonus(s, a);
                    acc += pa * q;
                }
                r + mdp.gamma * acc
            };
            residual = residual.max((v - values[s.index()]).abs());
            next[s.index()] = v;
        }
        values = next;
        if residual < tol {
            return Ok(ValueTable { values });
        }
    }
    Err(MdpError::NonConvergence {
        solver: "policy_evaluation",
        cap: ITERATION_CAP,
        residual,
    })
}

/// Goal-task optimal value `V*_i(s) = E[gamma^{N_i(s)}]`, the fixed point of
/// `V(g) = 1`, `V(s) = gamma * max_a E[V(s')]` over the world dynamics.
/// States that cannot reach the goal get 0.
pub fn goal_value(mdp: &TabularMdp, goal: StateId, tol: f64) -> Result<ValueTable, MdpError> {
    assert!(tol > 0.0);
    let n = mdp.n_states();
    let mut values = vec![0.0; n];
    values[goal.index()] = 1.0;
    let mut residual = f64::INFINITY;
    for _ in 0..ITERATION_CAP {
        residual = 0.0;
        let mut next = vec![0.0; n];
        next[goal.index()] = 1.0;
        for s in mdp.states() {
            if s == goal {
                continue;
            }
            let best = mdp
                .actions()
                .map(|a| {
                    mdp.dynamics(s, a)
                        .iter()
                        .map(|&(succ, p)| p * values[succ.index()])
                        .sum::<f64>()
                })
                .fold(f64::NEG_INFINITY, f64::max);
            let v = mdp.gamma * best;
            residual = residual.max((v - values[s.index()]).abs());
            next[s.index()] = v;
        }
        values = next;
        if residual < tol {
            return Ok(ValueTable { values });
        }
    }
    Err(MdpError::NonConvergence {
        solver: "goal_value",
        cap: ITERATION_CAP,
        residual,
    })
}

/// Greedy goal-seeking policy from a [`goal_value`] table: in each state the
/// lowest-index action maximizing the expected next value. The goal state
/// itself self-loops (an agent at the goal waits there).
pub fn goal_policy(mdp: &TabularMdp, goal: StateId, values: &ValueTable) -> Policy {
    let mut actions = Vec::with_capacity(mdp.n_states());
    for s in mdp.states() {
        if s == goal {
            actions.push(ActionId(0));
            continue;
        }
        let mut best = (ActionId(0), f64::NEG_INFINITY);
        for a in mdp.actions() {
            let q: f64 = mdp
                .dynamics(s, a)
                .iter()
                .map(|&(succ, p)| p * values.values[succ.index()])
                .sum();
            if q > best.1 + 1e-15 {
                best = (a, q);
            }
        }
        actions.push(best.0);
    }
    Policy::deterministic(&actions, mdp.n_actions())
}

/// Horizon past which gamma^n drops below 1e-12; used to truncate distance
/// distributions and closed-form pair sums.
pub fn discount_horizon(gamma: f64) -> usize {
    let h = ((1e-12f64).ln() / gamma.ln()).ceil() as usize;
    h.clamp(64, 20_000)
}

/// Distribution of the goal distance `N_i(s)` under the greedy goal policy.
///
/// Deterministic MDPs yield point masses at the shortest-path length; for
/// stochastic MDPs the trajectory-length distribution is accumulated by
/// forward recursion up to the discount horizon.
pub fn goal_distance(mdp: &TabularMdp, goal: StateId, tol: f64) -> Result<GoalDistanceDistribution, MdpError> {
    if mdp.is_deterministic() {
        // reverse BFS over the dynamics graph
        let n = mdp.n_states();
        let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
        for s in mdp.states() {
            for a in mdp.actions() {
                let succ = mdp.deterministic_step(s, a);
                if succ != s {
                    preds[succ.index()].push(s.index());
                }
            }
        }
        let mut dist = vec![usize::MAX; n];
        dist[goal.index()] = 0;
        let mut queue = VecDeque::new();
        queue.push_back(goal.index());
        while let Some(u) = queue.pop_front() {
            for &p in &preds[u] {
                if dist[p] == usize::MAX {
                    dist[p] = dist[u] + 1;
                    queue.push_back(p);
                }
            }
        }
        let per_state = dist
            .iter()
            .map(|&d| {
                if d == usize::MAX {
                    DistanceDist::unreachable()
                } else {
                    DistanceDist::point_mass(d)
                }
            })
            .collect();
        return Ok(GoalDistanceDistribution { goal, per_state });
    }

    let values = goal_value(mdp, goal, tol)?;
    let policy = goal_policy(mdp, goal, &values);
    let horizon = discount_horizon(mdp.gamma);
    let n = mdp.n_states();
    // probs[s][n] built column by column: P(N(s)=k) for s != goal is the
    // one-step pushforward of P(N=k-1).
    let mut probs: Vec<Vec<f64>> = vec![Vec::new(); n];
    let mut current = vec![0.0; n];
    current[goal.index()] = 1.0;
    for (s, p) in probs.iter_mut().enumerate() {
        p.push(if s == goal.index() { 1.0 } else { 0.0 });
    }
    for _k in 1..=horizon {
        let mut next = vec![0.0; n];
        for s in mdp.states() {
            if s == goal {
                continue;
            }
            let a = policy.action(s);
            let mut acc = 0.0;
            for &(succ, p) in mdp.dynamics(s, a) {
                acc += p * current[succ.index()];
            }
            next[s.index()] = acc;
        }
        for s in 0..n {
            probs[s].push(if s == goal.index() { 0.0 } else { next[s] });
        }
        current = next;
    }
    let per_state = probs.into_iter().map(|p| DistanceDist { probs: p }).collect();
    Ok(GoalDistanceDistribution { goal, per_state })
}

/// BFS shortest-path lengths to `goal` over the deterministic dynamics
/// (`usize::MAX` when unreachable). The workhorse behind exact auxiliary
/// tables: one reverse sweep yields `N_i(s)` for every state.
pub fn distances_to_goal(mdp: &TabularMdp, goal: StateId) -> Vec<usize> {
    debug_assert!(mdp.is_deterministic());
    let n = mdp.n_states();
    let mut preds: Vec<Vec<u32>> = vec![Vec::new(); n];
    for s in mdp.states() {
        for a in mdp.actions() {
            let succ = mdp.deterministic_step(s, a);
            if succ != s {
                preds[succ.index()].push(s.index() as u32);
            }
        }
    }
    let mut dist = vec![usize::MAX; n];
    dist[goal.index()] = 0;
    let mut queue = VecDeque::new();
    queue.push_back(goal.index());
    while let Some(u) = queue.pop_front() {
        let d = dist[u] + 1;
        for &p in &preds[u] {
            let p = p as usize;
            if dist[p] == usize::MAX {
                dist[p] = d;
                queue.push_back(p);
            }
        }
    }
    dist
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Example 1: two states, two actions. Action `a` moves x0 -> x1, `b`
    /// self-loops at x0; both actions self-loop at x1.
    pub fn two_state_chain(gamma: f64) -> TabularMdp {
        let rows = vec![
            vec![vec![(StateId(1), 1.0)], vec![(StateId(0), 1.0)]],
            vec![vec![(StateId(1), 1.0)], vec![(StateId(1), 1.0)]],
        ];
        TabularMdp::new(rows, vec![0.0, 0.0], gamma, StateId(0), vec![false, false])
            .unwrap()
            .with_labels(
                vec!["x0".into(), "x1".into()],
                vec!["a".into(), "b".into()],
            )
    }

    /// 3x3 open grid, 5 actions (up/down/left/right/noop), agent position
    /// is the whole state.
    fn open_grid_3x3(gamma: f64) -> TabularMdp {
        let idx = |r: usize, c: usize| StateId(r * 3 + c);
        let mut rows = Vec::new();
        for r in 0..3 {
            for c in 0..3 {
                let mut per_action = Vec::new();
                let moves: [(isize, isize); 5] = [(-1, 0), (1, 0), (0, -1), (0, 1), (0, 0)];
                for (dr, dc) in moves {
                    let nr = r as isize + dr;
                    let nc = c as isize + dc;
                    let succ = if (0..3).contains(&nr) && (0..3).contains(&nc) {
                        idx(nr as usize, nc as usize)
                    } else {
                        idx(r, c)
                    };
                    per_action.push(vec![(succ, 1.0)]);
                }
                rows.push(per_action);
            }
        }
        TabularMdp::new(rows, vec![0.0; 9], gamma, StateId(0), vec![false; 9]).unwrap()
    }

    /// Independent BFS oracle over an explicit adjacency closure.
    fn bfs_oracle(mdp: &TabularMdp, from: StateId, to: StateId) -> Option<usize> {
        let mut dist = vec![None; mdp.n_states()];
        dist[from.index()] = Some(0);
        let mut queue = VecDeque::from([from]);
        while let Some(s) = queue.pop_front() {
            for a in mdp.actions() {
                for &(succ, p) in mdp.dynamics(s, a) {
                    if p > 0.0 && dist[succ.index()].is_none() {
                        dist[succ.index()] = Some(dist[s.index()].unwrap() + 1);
                        queue.push_back(succ);
                    }
                }
            }
        }
        dist[to.index()]
    }

    #[test]
    fn reachable_states_examples() {
        let mdp = two_state_chain(0.5);
        assert_eq!(reachable_states(&mdp).len(), 2);

        // single absorbing state
        let single = TabularMdp::new(
            vec![vec![vec![(StateId(0), 1.0)], vec![(StateId(0), 1.0)]]],
            vec![0.0],
            0.9,
            StateId(0),
            vec![false],
        )
        .unwrap();
        assert_eq!(reachable_states(&single), vec![StateId(0)]);

        let grid = open_grid_3x3(0.95);
        assert_eq!(reachable_states(&grid).len(), 9);
    }

    #[test]
    fn value_iteration_zero_reward_is_zero() {
        let mdp = two_state_chain(0.5);
        let (v, _) = value_iteration(&mdp, |_| 0.0, 1e-10).unwrap();
        assert!(v.values.iter().all(|&x| x.abs() < 1e-9));
    }

    #[test]
    fn value_iteration_geometric_series() {
        // reward 1 at x1, gamma 0.5: V(x1) = 1/(1-g) = 2, V(x0) = g*V(x1) = 1
        let mdp = two_state_chain(0.5);
        let (v, pi) = value_iteration(&mdp, |s| if s == StateId(1) { 1.0 } else { 0.0 }, 1e-12).unwrap();
        assert!((v.get(StateId(1)) - 2.0).abs() < 1e-9);
        assert!((v.get(StateId(0)) - 1.0).abs() < 1e-9);
        assert_eq!(pi.action(StateId(0)), ActionId(0));
    }

    #[test]
    fn goal_value_examples() {
        let grid = open_grid_3x3(0.95);
        let goal = StateId(8); // opposite corner from (0,0)
        let v = goal_value(&grid, goal, 1e-12).unwrap();
        assert!((v.get(goal) - 1.0).abs() < 1e-12);
        let d = bfs_oracle(&grid, StateId(0), goal).unwrap();
        assert_eq!(d, 4);
        assert!((v.get(StateId(0)) - 0.95f64.powi(4)).abs() < 1e-9);
        assert!((v.get(StateId(0)) - 0.81450625).abs() < 1e-9);

        // no path to goal: two isolated self-loop states
        let iso = TabularMdp::new(
            vec![
                vec![vec![(StateId(0), 1.0)]],
                vec![vec![(StateId(1), 1.0)]],
            ],
            vec![0.0, 0.0],
            0.9,
            StateId(0),
            vec![false, false],
        )
        .unwrap();
        let v = goal_value(&iso, StateId(1), 1e-12).unwrap();
        assert_eq!(v.get(StateId(0)), 0.0);
    }

    #[test]
    fn goal_distance_examples() {
        let mdp = two_state_chain(0.5);
        let d = goal_distance(&mdp, StateId(1), 1e-12).unwrap();
        assert_eq!(d.per_state[1].as_point_mass(), Some(0));
        assert_eq!(d.per_state[0].as_point_mass(), Some(1));

        let grid = open_grid_3x3(0.95);
        let d = goal_distance(&grid, StateId(8), 1e-12).unwrap();
        assert_eq!(d.per_state[0].as_point_mass(), Some(4));
    }

    #[test]
    fn policy_evaluation_examples() {
        let mdp = two_state_chain(0.5);
        // baseline policy: always action a
        let pi = Policy::deterministic(&[ActionId(0), ActionId(0)], 2);
        let v = policy_evaluation(&mdp, &pi, |s| if s == StateId(1) { 1.0 } else { 0.0 }, 1e-12).unwrap();
        // value at x0 = gamma/(1-gamma) = 1
        assert!((v.get(StateId(0)) - 1.0).abs() < 1e-9);

        let (v_all, _) = policy_evaluation(&mdp, &pi, |_| 0.0, 1e-10)
            .map(|v| (v, ()))
            .unwrap();
        assert!(v_all.values.iter().all(|&x| x.abs() < 1e-9));
    }

    #[test]
    fn value_iteration_matches_greedy_policy_evaluation() {
        let tol = 1e-10;
        let grid = open_grid_3x3(0.95);
        let reward = |s: StateId| if s == StateId(4) { 1.0 } else { 0.0 };
        let (v, pi) = value_iteration(&grid, reward, tol).unwrap();
        let pe = policy_evaluation(&grid, &pi, reward, tol).unwrap();
        for s in grid.states() {
            assert!((v.get(s) - pe.get(s)).abs() < 2.0 * tol * 1e4.max(1.0));
        }
    }

    #[test]
    fn goal_value_matches_distance_point_mass_on_deterministic() {
        let grid = open_grid_3x3(0.99);
        for goal in grid.states() {
            let v = goal_value(&grid, goal, 1e-13).unwrap();
            let d = goal_distance(&grid, goal, 1e-13).unwrap();
            for s in grid.states() {
                let expected = d.per_state[s.index()]
                    .as_point_mass()
                    .map(|n| grid.gamma.powi(n as i32))
                    .unwrap_or(0.0);
                assert!(
                    (v.get(s) - expected).abs() < 1e-9,
                    "state {s:?} goal {goal:?}"
                );
            }
        }
    }

    #[test]
    fn invalid_mdps_rejected() {
        let bad_gamma = TabularMdp::new(
            vec![vec![vec![(StateId(0), 1.0)]]],
            vec![0.0],
            1.0,
            StateId(0),
            vec![false],
        );
        assert!(bad_gamma.is_err());

        let bad_sum = TabularMdp::new(
            vec![vec![vec![(StateId(0), 0.5)]]],
            vec![0.0],
            0.9,
            StateId(0),
            vec![false],
        );
        assert!(bad_sum.is_err());
    }

    #[test]
    fn terminal_states_absorb_episodically() {
        let rows = vec![
            vec![vec![(StateId(1), 1.0)]],
            vec![vec![(StateId(0), 1.0)]], // live dynamics out of the terminal state
        ];
        let mdp = TabularMdp::new(rows, vec![0.0, 1.0], 0.9, StateId(0), vec![false, true]).unwrap();
        assert_eq!(mdp.episodic_successors(StateId(1), ActionId(0)), vec![(StateId(1), 1.0)]);
        // value iteration does not bootstrap past the terminal
        let (v, _) = value_iteration(&mdp, |s| mdp.state_reward[s.index()], 1e-12).unwrap();
        assert!((v.get(StateId(1)) - 1.0).abs() < 1e-12);
        assert!((v.get(StateId(0)) - 0.9).abs() < 1e-9);
    }
}
