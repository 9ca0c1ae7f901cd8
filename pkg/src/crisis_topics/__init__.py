"""Topic modeling and discourse analytics for wildfire crisis conversations.

Two modeling tracks share one preprocessed corpus: a collapsed-Gibbs LDA
model over the (few, long) posts and an embedding/reduction/density-cluster
pipeline over the (many, short) comments. Latent topics from both tracks are
mapped into a hierarchical situational-awareness / crisis-narrative label
schema with human review overrides, and the labeled instances feed set
intersection, temporal, fire-partition, and URL analytics.
"""

__version__ = "0.1.0"
