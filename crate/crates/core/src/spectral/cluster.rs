use serde::Serialize;

/// A group of numerically equal eigenvalues.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Cluster {
    pub id: usize,
    /// Value of the first member.
    pub representative: f64,
    /// Indices into the ascending eigenvalue list (contiguous).
    pub members: Vec<usize>,
}

impl Cluster {
    pub fn multiplicity(&self) -> usize {
        self.members.len()
    }

    pub fn mean(&self, values: &[f64]) -> f64 {
        self.members.iter().map(|&i| values[i]).sum::<f64>() / self.members.len() as f64
    }
}

/// Greedy left-to-right grouping of ascending `values`: a value joins the
/// current cluster iff it lies within `tol · max(1, |rep|)` of the cluster's
/// first member.
pub fn cluster_eigenvalues(values: &[f64], tol: f64) -> Vec<Cluster> {
    let mut clusters: Vec<Cluster> = Vec::new();
    for (i, &v) in values.iter().enumerate() {
        match clusters.last_mut() {
            Some(c) if (v - c.representative).abs() <= tol * c.representative.abs().max(1.0) => {
                c.members.push(i)
            }
            _ => clusters.push(Cluster { id: clusters.len(), representative: v, members: vec![i] }),
        }
    }
    clusters
}
