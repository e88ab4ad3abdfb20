//! L2-regularized logistic regression over normalized-frequency vectors.
//!
//! The training objective is the summed negative log-likelihood plus
//! `λ/2 · ‖w‖²` (the bias is not penalized). It is minimized by full-batch
//! gradient descent with a fixed step in a diagonally preconditioned space,
//! accelerated with Nesterov momentum and gradient-based restarts. Everything
//! is deterministic: the same inputs and config give bit-identical weights.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::corpus::{Document, Label};
use crate::error::{Error, Result};
use crate::features::{FeatureVector, Vocabulary};
use crate::math::{logistic, sigmoid, softplus};

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct TrainConfig {
    /// L2 strength; `None` means `1 / N` for `N` training examples.
    pub l2_lambda: Option<f64>,
    pub max_epochs: usize,
    /// Stop once the largest absolute gradient component falls below this.
    pub convergence_tol: f64,
    /// Multiplier on the preconditioned step `1 / L`.
    pub learning_rate: f64,
    pub momentum: f64,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            l2_lambda: None,
            max_epochs: 10_000,
            convergence_tol: 1e-6,
            learning_rate: 1.0,
            momentum: 0.99,
            seed: 0,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidConfig(what.into()));
        if let Some(l) = self.l2_lambda {
            if !(l.is_finite() && l >= 0.0) {
                return bad("l2_lambda must be finite and >= 0");
            }
        }
        if !(self.convergence_tol > 0.0 && self.convergence_tol.is_finite()) {
            return bad("convergence_tol must be positive");
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return bad("learning_rate must be positive");
        }
        if !(0.0..1.0).contains(&self.momentum) {
            return bad("momentum must lie in [0, 1)");
        }
        Ok(())
    }
}

/// Outcome of a training run. `converged == false` is a warning, not an error.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TrainReport {
    pub epochs: usize,
    pub converged: bool,
    pub gradient_max_norm: f64,
    pub loss: f64,
    pub l2_lambda: f64,
}

/// Per-token weights plus bias over a fixed vocabulary.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearModel {
    weights: Vec<f64>,
    bias: f64,
    vocab: Vocabulary,
    config: TrainConfig,
}

impl LinearModel {
    pub fn from_parts(vocab: Vocabulary, weights: Vec<f64>, bias: f64, config: TrainConfig) -> Result<Self> {
        if weights.len() != vocab.len() {
            return Err(Error::InvalidConfig(alloc::format!(
                "{} weights for a vocabulary of {}",
                weights.len(),
                vocab.len()
            )));
        }
        if !bias.is_finite() || weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::NonFinite("model weights"));
        }
        Ok(Self {
            weights,
            bias,
            vocab,
            config,
        })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn bias(&self) -> f64 {
        self.bias
    }

    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn config(&self) -> &TrainConfig {
        &self.config
    }

    /// Weight of `token`, `None` when out of vocabulary.
    pub fn weight(&self, token: &str) -> Option<f64> {
        self.vocab.get(token).map(|i| self.weights[i as usize])
    }

    pub fn margin(&self, v: &FeatureVector) -> f64 {
        v.dot(&self.weights) + self.bias
    }

    pub fn score(&self, v: &FeatureVector) -> f64 {
        logistic(self.margin(v))
    }

    pub fn score_tokens(&self, tokens: &[String]) -> f64 {
        self.score(&crate::features::vectorize(tokens, &self.vocab))
    }
}

/// `DS = logistic(w · v + b)`.
pub fn score(model: &LinearModel, v: &FeatureVector) -> f64 {
    model.score(v)
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DocScore {
    pub id: String,
    pub score: f64,
}

pub fn score_documents<'a, I>(model: &LinearModel, docs: I) -> Vec<DocScore>
where
    I: IntoIterator<Item = &'a Document>,
{
    docs.into_iter()
        .map(|d| DocScore {
            id: d.id().into(),
            score: model.score_tokens(d.tokens()),
        })
        .collect()
}

fn targets(labels: &[Label]) -> Result<Vec<f64>> {
    labels
        .iter()
        .map(|l| match l {
            Label::Responsive => Ok(1.0),
            Label::NotResponsive => Ok(0.0),
            Label::Unlabeled => Err(Error::InvalidConfig("unlabeled example in training set".into())),
        })
        .collect()
}

/// Training objective and its gradient `(loss, ∂w, ∂b)`.
///
/// `targets` holds 1.0 for responsive and 0.0 for not responsive.
pub fn loss_and_gradient(
    vectors: &[FeatureVector],
    targets: &[f64],
    weights: &[f64],
    bias: f64,
    l2_lambda: f64,
) -> (f64, Vec<f64>, f64) {
    let mut loss = 0.0;
    let mut grad = vec![0.0; weights.len()];
    let mut grad_b = 0.0;
    for (v, &y) in vectors.iter().zip(targets) {
        let z = v.dot(weights) + bias;
        loss += softplus(z) - y * z;
        let r = sigmoid(z) - y;
        grad_b += r;
        for &(i, x) in v.entries() {
            grad[i as usize] += r * x;
        }
    }
    let mut sq = 0.0;
    for (g, w) in grad.iter_mut().zip(weights) {
        *g += l2_lambda * w;
        sq += w * w;
    }
    loss += 0.5 * l2_lambda * sq;
    (loss, grad, grad_b)
}

fn max_abs(g: &[f64], gb: f64) -> f64 {
    g.iter().fold(libm::fabs(gb), |m, x| m.max(libm::fabs(*x)))
}

/// Largest eigenvalue of `P^½ (¼ AᵀA + λI_w) P^½` by power iteration,
/// where `A = [X 1]` and `P` is the diagonal preconditioner.
fn lipschitz_bound(vectors: &[FeatureVector], precond: &[f64], precond_b: f64, l2_lambda: f64) -> f64 {
    let dim = precond.len();
    let sqrt_p: Vec<f64> = precond.iter().map(|p| libm::sqrt(*p)).collect();
    let sqrt_pb = libm::sqrt(precond_b);
    let mut v = vec![1.0; dim];
    let mut vb = 1.0;
    let mut est = 0.0;
    for _ in 0..200 {
        let norm = libm::sqrt(v.iter().map(|x| x * x).sum::<f64>() + vb * vb);
        if norm == 0.0 {
            break;
        }
        v.iter_mut().for_each(|x| *x /= norm);
        vb /= norm;
        let u: Vec<f64> = v.iter().zip(&sqrt_p).map(|(a, b)| a * b).collect();
        let ub = vb * sqrt_pb;
        let mut r = vec![0.0; dim];
        let mut rb = 0.0;
        for x in vectors {
            let t = 0.25 * (x.dot(&u) + ub);
            rb += t;
            for &(i, val) in x.entries() {
                r[i as usize] += t * val;
            }
        }
        for j in 0..dim {
            r[j] = (r[j] + l2_lambda * u[j]) * sqrt_p[j];
        }
        rb *= sqrt_pb;
        est = libm::sqrt(r.iter().map(|x| x * x).sum::<f64>() + rb * rb);
        v = r;
        vb = rb;
    }
    est
}

/// Trains from zero weights. With `max_epochs == 0` the model is all zeros.
pub fn train(
    vectors: &[FeatureVector],
    labels: &[Label],
    vocab: Vocabulary,
    config: &TrainConfig,
) -> Result<(LinearModel, TrainReport)> {
    let dim = vocab.len();
    train_from(vectors, labels, vocab, config, vec![0.0; dim], 0.0)
}

/// Trains starting from the given weights and bias.
pub fn train_from(
    vectors: &[FeatureVector],
    labels: &[Label],
    vocab: Vocabulary,
    config: &TrainConfig,
    init_weights: Vec<f64>,
    init_bias: f64,
) -> Result<(LinearModel, TrainReport)> {
    config.validate()?;
    if vectors.len() != labels.len() {
        return Err(Error::LengthMismatch {
            vectors: vectors.len(),
            labels: labels.len(),
        });
    }
    let y = targets(labels)?;
    let positives = y.iter().filter(|&&t| t == 1.0).count();
    if positives == 0 || positives == y.len() {
        return Err(Error::SingleClass);
    }
    let dim = vocab.len();
    if init_weights.len() != dim {
        return Err(Error::InvalidConfig("initial weights do not match the vocabulary".into()));
    }
    if let Some(bad) = vectors.iter().flat_map(|v| v.entries()).find(|e| e.0 as usize >= dim) {
        return Err(Error::InvalidConfig(alloc::format!(
            "feature index {} outside vocabulary of {dim}",
            bad.0
        )));
    }
    let n = vectors.len() as f64;
    let lambda = config.l2_lambda.unwrap_or(1.0 / n);

    let mut w = init_weights;
    let mut b = init_bias;
    let (mut loss, mut grad, mut grad_b) = loss_and_gradient(vectors, &y, &w, b, lambda);
    let mut report = TrainReport {
        epochs: 0,
        converged: false,
        gradient_max_norm: max_abs(&grad, grad_b),
        loss,
        l2_lambda: lambda,
    };
    if config.max_epochs == 0 {
        let resolved = TrainConfig {
            l2_lambda: Some(lambda),
            ..config.clone()
        };
        let model = LinearModel::from_parts(vocab, w, b, resolved)?;
        return Ok((model, report));
    }

    let mut precond = vec![0.0; dim];
    for v in vectors {
        for &(i, x) in v.entries() {
            precond[i as usize] += 0.25 * x * x;
        }
    }
    for p in precond.iter_mut() {
        let h = *p + lambda;
        *p = if h > 0.0 { 1.0 / h } else { 0.0 };
    }
    let precond_b = 1.0 / (0.25 * n);
    let step = config.learning_rate / (1.1 * lipschitz_bound(vectors, &precond, precond_b, lambda));

    // Nesterov: y = x + μ·(x − x_prev); x_next = y − step·P·∇f(y).
    let mut vel = vec![0.0; dim];
    let mut look_w = w.clone();
    let mut look_b = b;
    for epoch in 1..=config.max_epochs {
        let (l, g, gb) = loss_and_gradient(vectors, &y, &look_w, look_b, lambda);
        if !l.is_finite() {
            return Err(Error::NonFinite("training loss"));
        }
        report.epochs = epoch;
        (loss, grad, grad_b) = (l, g, gb);
        let norm = max_abs(&grad, grad_b);
        if norm < config.convergence_tol {
            w = look_w;
            b = look_b;
            report.converged = true;
            break;
        }
        let mut ascent = 0.0;
        for j in 0..dim {
            let next = look_w[j] - step * precond[j] * grad[j];
            vel[j] = next - w[j];
            ascent += grad[j] * vel[j];
            w[j] = next;
        }
        let next_b = look_b - step * precond_b * grad_b;
        let vel_b = next_b - b;
        ascent += grad_b * vel_b;
        b = next_b;
        let mu = if ascent > 0.0 { 0.0 } else { config.momentum };
        for j in 0..dim {
            look_w[j] = w[j] + mu * vel[j];
        }
        look_b = b + mu * vel_b;
    }
    if !report.converged {
        let (l, g, gb) = loss_and_gradient(vectors, &y, &w, b, lambda);
        (loss, grad, grad_b) = (l, g, gb);
    }
    report.loss = loss;
    report.gradient_max_norm = max_abs(&grad, grad_b);
    let resolved = TrainConfig {
        l2_lambda: Some(lambda),
        ..config.clone()
    };
    let model = LinearModel::from_parts(vocab, w, b, resolved)?;
    Ok((model, report))
}

/// Score at or above which `target_recall` of the responsive scores fall.
///
/// Returns the `⌈target · R⌉`-th highest score; `DS >= cutoff` counts as responsive.
pub fn select_cutoff(responsive_scores: &[f64], target_recall: f64) -> Result<f64> {
    if responsive_scores.is_empty() {
        return Err(Error::Empty("responsive scores"));
    }
    if !(target_recall > 0.0 && target_recall <= 1.0) {
        return Err(Error::InvalidConfig(alloc::format!(
            "target recall {target_recall} outside (0, 1]"
        )));
    }
    let mut sorted = responsive_scores.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let r = sorted.len();
    // guard against 0.7 * 10 = 7.000000000000001
    let needed = libm::ceil(target_recall * r as f64 - 1e-9).clamp(1.0, r as f64) as usize;
    Ok(sorted[needed - 1])
}
