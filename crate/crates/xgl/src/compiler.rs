//! Compile deterministic communication protocols into XOR-game strategies
//! powered by nonlocal boxes.
//!
//! A protocol tree sends one bit per internal node; its leaf is the answer.
//! The compiled strategy replays the whole tree without any communication:
//! both sub-strategies of a node are evaluated unconditionally, and one
//! nonlocal box per node implements a 1-bit selector between their output
//! shares. The selector works through the identity
//! `select(p0, p1, t) = p0 XOR t (p0 XOR p1)`: the pair holder feeds
//! `p0 XOR p1` into the box, the address holder feeds `t`, and the box's
//! win/lose coin becomes a bias-`delta` error bit on that level. Each input
//! pair therefore picks up one independent error per tree level it actually
//! traverses, and the achieved bias against the target is an exactly
//! computable weighted sum of `delta^depth` terms.
//!
//! A guess-the-transcript baseline using shared randomness instead of boxes
//! gives the same structure with `delta` frozen at 1/2 and serves as the
//! reference the box construction has to beat.

use serde::{Deserialize, Serialize};

use crate::boolfn::BoolFn;
use crate::error::{Error, Result};
use crate::nlbox::IsotropicBox;
use crate::rng::Stream;
use crate::xorgame::JointDistribution;

/// Which side speaks at a node / holds the selector address.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Party {
    Alice,
    Bob,
}

/// A node of a deterministic protocol tree.
#[derive(Clone, Debug)]
pub enum Node {
    /// Output bit both parties learn at the end of this path.
    Leaf(bool),
    /// `sender` transmits `predicate(own input)` and play descends into
    /// `zero` or `one` accordingly.
    Send {
        sender: Party,
        predicate: BoolFn,
        zero: Box<Node>,
        one: Box<Node>,
    },
}

impl Node {
    fn depth(&self) -> usize {
        match self {
            Node::Leaf(_) => 0,
            Node::Send { zero, one, .. } => 1 + zero.depth().max(one.depth()),
        }
    }

    fn internal_count(&self) -> usize {
        match self {
            Node::Leaf(_) => 0,
            Node::Send { zero, one, .. } => 1 + zero.internal_count() + one.internal_count(),
        }
    }

    fn check_arity(&self, n: usize) -> Result<()> {
        match self {
            Node::Leaf(_) => Ok(()),
            Node::Send {
                predicate,
                zero,
                one,
                ..
            } => {
                if predicate.arity() != n {
                    return Err(Error::ArityMismatch {
                        left: predicate.arity(),
                        right: n,
                    });
                }
                zero.check_arity(n)?;
                one.check_arity(n)
            }
        }
    }

    /// Follow the true transcript for `(x, y)`: the leaf output and the
    /// number of bits sent on the way.
    fn trace(&self, x: usize, y: usize) -> (bool, usize) {
        match self {
            Node::Leaf(out) => (*out, 0),
            Node::Send {
                sender,
                predicate,
                zero,
                one,
            } => {
                let bit = match sender {
                    Party::Alice => predicate.bit(x),
                    Party::Bob => predicate.bit(y),
                };
                let (out, d) = if bit {
                    one.trace(x, y)
                } else {
                    zero.trace(x, y)
                };
                (out, d + 1)
            }
        }
    }
}

/// A deterministic two-party protocol: `n` input bits per side and a finite
/// binary message tree.
#[derive(Clone, Debug)]
pub struct ProtocolTree {
    n: usize,
    root: Node,
}

impl ProtocolTree {
    pub fn new(n: usize, root: Node) -> Result<Self> {
        root.check_arity(n)?;
        Ok(ProtocolTree { n, root })
    }

    /// Per-side input arity.
    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn depth(&self) -> usize {
        self.root.depth()
    }

    pub fn internal_nodes(&self) -> usize {
        self.root.internal_count()
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    /// Run the protocol on one input pair: `(output, bits sent)`.
    pub fn evaluate(&self, x: usize, y: usize) -> (bool, usize) {
        self.root.trace(x, y)
    }

    /// The function this protocol computes, as a table over input pairs
    /// (low half Alice's input).
    pub fn computed_fn(&self) -> Result<BoolFn> {
        BoolFn::from_fn(2 * self.n, |zw| {
            let x = zw & ((1 << self.n) - 1);
            let y = zw >> self.n;
            self.root.trace(x, y).0
        })
    }

    /// A uniformly random full tree of the given depth: random senders and
    /// random predicates at every node, random leaf bits. Every leaf sits at
    /// exactly `depth`, so the compiled bias of the induced zero-error game
    /// is `delta^depth` on the nose.
    pub fn random_full(n: usize, depth: usize, rng: &mut Stream) -> Result<Self> {
        fn build(n: usize, depth: usize, rng: &mut Stream) -> Result<Node> {
            if depth == 0 {
                return Ok(Node::Leaf(rng.coin()));
            }
            let sender = if rng.coin() { Party::Alice } else { Party::Bob };
            let predicate = BoolFn::from_fn(n, |_| rng.coin())?;
            Ok(Node::Send {
                sender,
                predicate,
                zero: Box::new(build(n, depth - 1, rng)?),
                one: Box::new(build(n, depth - 1, rng)?),
            })
        }
        let root = build(n, depth, rng)?;
        ProtocolTree::new(n, root)
    }

    // ----- file format ------------------------------------------------------

    /// Parse the JSON tree format: `{"n": k, "root": <node>}` where a node
    /// is `{"leaf": 0|1}` or `{"sender": "A"|"B", "predicate": P,
    /// "zero": <node>, "one": <node>}`. A predicate is a named function
    /// (`or`, `and`, `parity`, `eq`, `ip`, `bent2`), an inline table
    /// (binary or hex digits), or `@path` referencing a truth-table file
    /// relative to `base` (the current directory when `base` is `None`).
    pub fn from_json(text: &str, base: Option<&std::path::Path>) -> Result<Self> {
        let spec: TreeFile =
            serde_json::from_str(text).map_err(|e| Error::parse(format!("protocol tree: {e}")))?;
        let root = spec.root.build(spec.n, base)?;
        ProtocolTree::new(spec.n, root)
    }

    pub fn from_json_file(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text, path.parent())
    }

    pub fn to_json(&self) -> String {
        fn node_spec(node: &Node) -> NodeSpec {
            match node {
                Node::Leaf(out) => NodeSpec::Leaf { leaf: *out as u8 },
                Node::Send {
                    sender,
                    predicate,
                    zero,
                    one,
                } => NodeSpec::Send {
                    sender: match sender {
                        Party::Alice => "A".to_string(),
                        Party::Bob => "B".to_string(),
                    },
                    predicate: (0..predicate.len())
                        .map(|z| if predicate.bit(z) { '1' } else { '0' })
                        .collect(),
                    zero: Box::new(node_spec(zero)),
                    one: Box::new(node_spec(one)),
                },
            }
        }
        let file = TreeFile {
            n: self.n,
            root: node_spec(&self.root),
        };
        serde_json::to_string_pretty(&file).expect("tree serialization cannot fail")
    }
}

#[derive(Serialize, Deserialize)]
struct TreeFile {
    n: usize,
    root: NodeSpec,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum NodeSpec {
    Leaf {
        leaf: u8,
    },
    Send {
        sender: String,
        predicate: String,
        zero: Box<NodeSpec>,
        one: Box<NodeSpec>,
    },
}

impl NodeSpec {
    fn build(&self, n: usize, base: Option<&std::path::Path>) -> Result<Node> {
        match self {
            NodeSpec::Leaf { leaf } => match leaf {
                0 => Ok(Node::Leaf(false)),
                1 => Ok(Node::Leaf(true)),
                other => Err(Error::parse(format!("leaf must be 0 or 1, got {other}"))),
            },
            NodeSpec::Send {
                sender,
                predicate,
                zero,
                one,
            } => {
                let sender = match sender.as_str() {
                    "A" | "a" => Party::Alice,
                    "B" | "b" => Party::Bob,
                    other => {
                        return Err(Error::parse(format!(
                            "sender must be \"A\" or \"B\", got {other:?}"
                        )))
                    }
                };
                let predicate = parse_predicate(predicate, n, base)?;
                Ok(Node::Send {
                    sender,
                    predicate,
                    zero: Box::new(zero.build(n, base)?),
                    one: Box::new(one.build(n, base)?),
                })
            }
        }
    }
}

/// Named functions available wherever a predicate or game function can be
/// written by name.
pub fn named_fn(name: &str, n: usize) -> Result<BoolFn> {
    match name {
        "or" => BoolFn::or(n),
        "and" => BoolFn::and(n),
        "parity" => BoolFn::parity(n),
        "eq" => BoolFn::equality(n),
        "ip" => BoolFn::inner_product(n),
        "bent2" => {
            if n != 2 {
                return Err(Error::domain(format!(
                    "bent2 is a 2-variable function, got n={n}"
                )));
            }
            Ok(BoolFn::bent2())
        }
        other => Err(Error::parse(format!("unknown function name {other:?}"))),
    }
}

fn parse_predicate(text: &str, n: usize, base: Option<&std::path::Path>) -> Result<BoolFn> {
    let text = text.trim();
    if let Some(path) = text.strip_prefix('@') {
        let path = match base {
            Some(dir) => dir.join(path),
            None => std::path::PathBuf::from(path),
        };
        let table = std::fs::read_to_string(&path)?;
        let f = BoolFn::from_table_text(&table)?;
        if f.arity() != n {
            return Err(Error::ArityMismatch {
                left: f.arity(),
                right: n,
            });
        }
        return Ok(f);
    }
    if let Ok(f) = named_fn(text, n) {
        return Ok(f);
    }
    let digits = text.strip_prefix("0x").unwrap_or(text);
    BoolFn::from_table_text(&format!("n={n}\n{digits}"))
}

/// Supplies one nonlocal-box use per call. `draw(pair_input, addr_input)`
/// returns the outcome delivered to the pair holder followed by the outcome
/// delivered to the address holder. Implementations decide the physics;
/// evaluation only routes bits.
pub trait BoxSource {
    fn draw(&mut self, pair_input: bool, addr_input: bool) -> (bool, bool);
}

/// Samples fresh isotropic boxes from a stream.
pub struct IsotropicSource {
    pub bx: IsotropicBox,
    pub rng: Stream,
}

impl BoxSource for IsotropicSource {
    fn draw(&mut self, pair_input: bool, addr_input: bool) -> (bool, bool) {
        self.bx.sample(pair_input, addr_input, &mut self.rng)
    }
}

/// Deepest tree [`compile`] accepts; a full tree at this depth already means
/// `2^20 - 1` box slots.
pub const MAX_COMPILE_DEPTH: usize = 20;

/// Depth cap for the shared-randomness baseline.
pub const MAX_BASELINE_DEPTH: usize = 30;

#[derive(Clone, Debug)]
enum CompiledNode {
    Leaf {
        output: bool,
    },
    Gadget {
        sender: Party,
        predicate: BoolFn,
        zero: Box<CompiledNode>,
        one: Box<CompiledNode>,
    },
}

impl CompiledNode {
    /// Evaluate both parties' shares. At every gadget the non-sender feeds
    /// the XOR of its two sub-shares into the box and the sender feeds its
    /// message bit; the sender folds the selected sub-share into its own
    /// output. Alice's share only ever reads `x` and outcomes delivered to
    /// her side, and symmetrically for Bob.
    fn eval(&self, x: usize, y: usize, source: &mut dyn BoxSource) -> (bool, bool) {
        match self {
            CompiledNode::Leaf { output } => (*output, false),
            CompiledNode::Gadget {
                sender,
                predicate,
                zero,
                one,
            } => {
                let (a0, b0) = zero.eval(x, y, source);
                let (a1, b1) = one.eval(x, y, source);
                match sender {
                    Party::Alice => {
                        let t = predicate.bit(x);
                        let (o_pair, o_addr) = source.draw(b0 ^ b1, t);
                        let a = (if t { a1 } else { a0 }) ^ o_addr;
                        let b = b0 ^ o_pair;
                        (a, b)
                    }
                    Party::Bob => {
                        let t = predicate.bit(y);
                        let (o_pair, o_addr) = source.draw(a0 ^ a1, t);
                        let a = a0 ^ o_pair;
                        let b = (if t { b1 } else { b0 }) ^ o_addr;
                        (a, b)
                    }
                }
            }
        }
    }

    fn trace(&self, x: usize, y: usize) -> (bool, usize) {
        match self {
            CompiledNode::Leaf { output } => (*output, 0),
            CompiledNode::Gadget {
                sender,
                predicate,
                zero,
                one,
            } => {
                let t = match sender {
                    Party::Alice => predicate.bit(x),
                    Party::Bob => predicate.bit(y),
                };
                let (out, d) = if t { one.trace(x, y) } else { zero.trace(x, y) };
                (out, d + 1)
            }
        }
    }
}

/// The no-communication strategy compiled from a protocol tree: one box
/// slot per internal node, consumed in a fixed post-order, so identical
/// sources give identical transcripts.
#[derive(Clone, Debug)]
pub struct CompiledStrategy {
    n: usize,
    depth: usize,
    boxes: usize,
    root: CompiledNode,
}

impl CompiledStrategy {
    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Number of box slots, one per internal node (`2^depth - 1` when the
    /// tree is full).
    pub fn box_count(&self) -> usize {
        self.boxes
    }

    /// Both parties' output bits for one play, drawing boxes from `source`.
    pub fn evaluate(&self, x: usize, y: usize, source: &mut dyn BoxSource) -> (bool, bool) {
        self.root.eval(x, y, source)
    }

    /// Noiseless output and traversed depth for one input pair.
    pub fn trace(&self, x: usize, y: usize) -> (bool, usize) {
        self.root.trace(x, y)
    }
}

/// Mirror the tree into a [`CompiledStrategy`].
pub fn compile(tree: &ProtocolTree) -> Result<CompiledStrategy> {
    let depth = tree.depth();
    if depth > MAX_COMPILE_DEPTH {
        return Err(Error::Capacity {
            what: "protocol depth",
            got: depth,
            max: MAX_COMPILE_DEPTH,
        });
    }
    fn build(node: &Node) -> CompiledNode {
        match node {
            Node::Leaf(out) => CompiledNode::Leaf { output: *out },
            Node::Send {
                sender,
                predicate,
                zero,
                one,
            } => CompiledNode::Gadget {
                sender: *sender,
                predicate: predicate.clone(),
                zero: Box::new(build(zero)),
                one: Box::new(build(one)),
            },
        }
    }
    Ok(CompiledStrategy {
        n: tree.arity(),
        depth,
        boxes: tree.internal_nodes(),
        root: build(&tree.root),
    })
}

fn check_game(n: usize, f: &BoolFn, mu: &JointDistribution) -> Result<()> {
    if f.arity() != 2 * n {
        return Err(Error::ArityMismatch {
            left: f.arity(),
            right: 2 * n,
        });
    }
    if mu.side_arity() != n {
        return Err(Error::ArityMismatch {
            left: mu.side_arity(),
            right: n,
        });
    }
    Ok(())
}

/// Exact bias of the compiled strategy against `f` under `mu` with boxes of
/// bias `delta`:
///
/// ```text
/// sum_{x,y} mu(x,y) . s(x,y) . delta^{d(x,y)}
/// ```
///
/// where `d` is the depth the pair traverses and `s` is +1 where the
/// noiseless output agrees with `f`. Exact because the box error on each
/// traversed level is an independent bias-`delta` coin, and biases of
/// independent XORed coins multiply.
pub fn exact_bias(
    strategy: &CompiledStrategy,
    f: &BoolFn,
    mu: &JointDistribution,
    delta: f64,
) -> Result<f64> {
    check_game(strategy.n, f, mu)?;
    if !(0.0..=1.0).contains(&delta) {
        return Err(Error::domain(format!(
            "delta must lie in [0, 1], got {delta}"
        )));
    }
    let side = 1usize << strategy.n;
    let mut total = 0.0;
    for x in 0..side {
        for y in 0..side {
            let w = mu.prob(x, y);
            if w == 0.0 {
                continue;
            }
            let (out, d) = strategy.trace(x, y);
            let sign = if out == f.bit(x | y << strategy.n) {
                1.0
            } else {
                -1.0
            };
            total += w * sign * delta.powi(d as i32);
        }
    }
    Ok(total)
}

/// Report of a Monte Carlo run.
#[derive(Clone, Copy, Debug)]
pub struct XorGameReport {
    pub exact_bias: f64,
    pub empirical_bias: f64,
    pub samples: u64,
    pub stderr: f64,
}

impl XorGameReport {
    /// Is the empirical estimate within `sigmas` standard errors of the
    /// exact value?
    pub fn within(&self, sigmas: f64) -> bool {
        (self.empirical_bias - self.exact_bias).abs() <= sigmas * self.stderr + 1e-15
    }
}

/// Play the compiled strategy `samples` times, sampling every box slot, and
/// report the empirical correlation next to the exact bias. Sample `i`
/// draws from the substream `seed . split(i)`, so the result is bitwise
/// reproducible and independent of how samples are scheduled over threads.
pub fn simulate(
    strategy: &CompiledStrategy,
    f: &BoolFn,
    mu: &JointDistribution,
    delta: f64,
    samples: u64,
    seed: u64,
) -> Result<XorGameReport> {
    use rayon::prelude::*;

    if samples == 0 {
        return Err(Error::domain("at least one sample is required"));
    }
    let exact = exact_bias(strategy, f, mu, delta)?;
    let bx = IsotropicBox::new(delta)?;
    let sampler = mu.sampler();
    let base = Stream::new(seed);
    let n = strategy.n;
    let sum: i64 = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = base.split(i);
            let (x, y) = sampler.sample(&mut rng);
            let mut source = IsotropicSource { bx, rng };
            let (a, b) = strategy.evaluate(x, y, &mut source);
            if (a ^ b) == f.bit(x | y << n) {
                1i64
            } else {
                -1i64
            }
        })
        .sum();
    let empirical = sum as f64 / samples as f64;
    let stderr = ((1.0 - exact * exact).max(0.0) / samples as f64).sqrt();
    Ok(XorGameReport {
        exact_bias: exact,
        empirical_bias: empirical,
        samples,
        stderr,
    })
}

/// The shared-randomness baseline: guess the transcript with `depth` public
/// coins, have each party check the guess against its own messages, and
/// output the guessed leaf (Alice) and zero (Bob) when consistent, fresh
/// coins otherwise. Exactly one guess per input matches the true
/// transcript, so the analytic bias is the `delta = 1/2` specialization of
/// the compiled formula.
pub fn transcript_guessing_baseline(
    tree: &ProtocolTree,
    f: &BoolFn,
    mu: &JointDistribution,
    samples: u64,
    seed: u64,
) -> Result<XorGameReport> {
    use rayon::prelude::*;

    check_game(tree.arity(), f, mu)?;
    if samples == 0 {
        return Err(Error::domain("at least one sample is required"));
    }
    let depth = tree.depth();
    if depth > MAX_BASELINE_DEPTH {
        return Err(Error::Capacity {
            what: "protocol depth",
            got: depth,
            max: MAX_BASELINE_DEPTH,
        });
    }

    // analytic value: mass-weighted signs at 2^{-d(x,y)}
    let side = 1usize << tree.arity();
    let mut analytic = 0.0;
    for x in 0..side {
        for y in 0..side {
            let w = mu.prob(x, y);
            if w == 0.0 {
                continue;
            }
            let (out, d) = tree.evaluate(x, y);
            let sign = if out == f.bit(x | y << tree.arity()) {
                1.0
            } else {
                -1.0
            };
            analytic += w * sign * 0.5f64.powi(d as i32);
        }
    }

    let sampler = mu.sampler();
    let base = Stream::new(seed);
    let n = tree.arity();
    let sum: i64 = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = base.split(i);
            let (x, y) = sampler.sample(&mut rng);
            // walk the guessed path; each party checks its own nodes
            let mut node = tree.root();
            let mut alice_ok = true;
            let mut bob_ok = true;
            let out = loop {
                match node {
                    Node::Leaf(o) => break *o,
                    Node::Send {
                        sender,
                        predicate,
                        zero,
                        one,
                    } => {
                        let guess = rng.coin();
                        match sender {
                            Party::Alice => alice_ok &= predicate.bit(x) == guess,
                            Party::Bob => bob_ok &= predicate.bit(y) == guess,
                        }
                        node = if guess { one } else { zero };
                    }
                }
            };
            let a = if alice_ok { out } else { rng.coin() };
            let b = if bob_ok { false } else { rng.coin() };
            if (a ^ b) == f.bit(x | y << n) {
                1i64
            } else {
                -1i64
            }
        })
        .sum();
    let empirical = sum as f64 / samples as f64;
    let stderr = ((1.0 - analytic * analytic).max(0.0) / samples as f64).sqrt();
    Ok(XorGameReport {
        exact_bias: analytic,
        empirical_bias: empirical,
        samples,
        stderr,
    })
}

/// Exact compiled bias measured against a reference function `h` that may
/// differ from the function `f` the tree approximates.
///
/// The caller asserts the tree computes `f` with error probability at most
/// `epsilon` under `mu`. The construction then guarantees
///
/// ```text
/// bias >= delta^depth ((1 - epsilon) E_mu[f h] - epsilon)
/// ```
///
/// and the computed value is checked against that floor; falling below it
/// is reported as [`Error::GuaranteeViolation`]. The check uses true leaf
/// depths, so a tree that answers wrongly at a leaf shallower than `depth`
/// can trip it even when the precondition holds; padding the tree to full
/// depth restores the literal guarantee.
pub fn exact_bias_against(
    tree: &ProtocolTree,
    f: &BoolFn,
    h: &BoolFn,
    mu: &JointDistribution,
    delta: f64,
    epsilon: f64,
) -> Result<f64> {
    check_game(tree.arity(), f, mu)?;
    check_game(tree.arity(), h, mu)?;
    if !(0.0..=1.0).contains(&delta) {
        return Err(Error::domain(format!(
            "delta must lie in [0, 1], got {delta}"
        )));
    }
    if !(0.0..=0.5).contains(&epsilon) {
        return Err(Error::domain(format!(
            "epsilon must lie in [0, 1/2], got {epsilon}"
        )));
    }
    let n = tree.arity();
    let side = 1usize << n;
    let mut value = 0.0;
    let mut f_dot_h = 0.0;
    for x in 0..side {
        for y in 0..side {
            let w = mu.prob(x, y);
            if w == 0.0 {
                continue;
            }
            let pair = x | y << n;
            let (out, d) = tree.evaluate(x, y);
            let sign_h = if out == h.bit(pair) { 1.0 } else { -1.0 };
            value += w * sign_h * delta.powi(d as i32);
            f_dot_h += w * f.value(pair) * h.value(pair);
        }
    }
    let floor = delta.powi(tree.depth() as i32) * ((1.0 - epsilon) * f_dot_h - epsilon);
    if value < floor - 1e-9 {
        return Err(Error::GuaranteeViolation(format!(
            "compiled bias {value:.12} fell below its floor {floor:.12}"
        )));
    }
    Ok(value)
}
