"""The eight pipeline stages and their artifact contracts.

Every stage reads only recorded upstream artifacts, writes its own files
into the output directory, and registers them in the manifest. Identical
inputs and config produce byte-identical artifacts.
"""

from __future__ import annotations

import dataclasses
import json
import logging
from pathlib import Path

import numpy as np

from .. import analytics
from ..coherence import CoherenceConfig, cv_coherence
from ..embed import (
    ClustererConfig,
    EmbeddingMatrix,
    HashingProvider,
    HttpEmbeddingProvider,
    ReducerConfig,
    fetch_embeddings,
    hdbscan,
    load_embeddings,
    write_embeddings,
)
from ..embed.clusterer import ClusterAssignment
from ..errors import ConfigError
from ..ingest import (
    CleanDoc,
    EmojiTable,
    Rejection,
    TokenizerConfig,
    build_vocabulary,
    corpus_content_hash,
    load_corpus,
    load_stopwords,
    preprocess,
    read_clean_docs,
    tokenize,
    write_clean_docs,
)
from ..ioutil import atomic_write_json, atomic_write_text, read_json, sha256_file
from ..lda import (
    LdaConfig,
    coherence_evaluator,
    save_model,
    sweep_topic_count,
    top_terms,
    train_lda,
)
from ..represent import (
    LlmClient,
    TopicRepresentation,
    VectorizerConfig,
    fit_ctfidf,
    llm_label,
    mmr_select,
    representative_docs,
)
from ..schema import (
    InstanceLabels,
    TopicLabelSet,
    apply_review,
    flag_grief_mh,
    load_lexicon,
    load_overrides,
    load_rules,
    load_schema,
    map_topic,
    propagate_labels,
)
from .config import PipelineConfig
from .manifest import PipelineManifest, STAGES

logger = logging.getLogger(__name__)


def _tokenizer(config: PipelineConfig) -> TokenizerConfig:
    section = config.section("tokenize")
    stopword_path = config.resolve_path(section.get("stopwords"))
    return TokenizerConfig(stopwords=load_stopwords(stopword_path))


def _read_docs(out_dir: Path) -> list[CleanDoc]:
    return read_clean_docs(out_dir / "clean_docs.jsonl")


# --------------------------------------------------------------------------
# Stage implementations. Each returns the list of files it wrote.

def stage_ingest(config: PipelineConfig, out_dir: Path) -> list[Path]:
    section = config.section("ingest")
    corpus_path = config.corpus_path()
    load = load_corpus(
        corpus_path,
        lenient=bool(section.get("lenient", False)),
        window=tuple(section["window"]) if section.get("window") else None,
    )
    table_path = config.resolve_path(section.get("emoji_table"))
    table = EmojiTable.from_tsv(table_path) if table_path else EmojiTable.bundled()
    min_words = int(section.get("min_words", 10))

    docs: list[CleanDoc] = []
    rejections: dict[str, int] = {"too_short": 0, "deleted": 0, "empty": 0}
    kept = {"post": 0, "comment": 0}
    for record in load.records:
        result = preprocess(record, table, min_words=min_words)
        if isinstance(result, Rejection):
            rejections[result.reason] += 1
        else:
            docs.append(result)
            kept[result.kind] += 1

    unique_urls = {m.url for doc in docs for m in doc.urls}
    stats = {
        "posts_in": load.counts["post"],
        "posts_kept": kept["post"],
        "comments_in": load.counts["comment"],
        "comments_kept": kept["comment"],
        "deleted": rejections["deleted"],
        "unique_urls": len(unique_urls),
        "rejections": rejections,
        "skipped_lines": load.skipped,
    }

    write_clean_docs(docs, out_dir / "clean_docs.jsonl")
    url_lines = [
        json.dumps({"url": m.url, "domain": m.domain, "source_id": m.source_id},
                   sort_keys=True)
        for doc in docs for m in doc.urls
    ]
    atomic_write_text(out_dir / "url_mentions.jsonl",
                      "\n".join(url_lines) + ("\n" if url_lines else ""))
    atomic_write_json(out_dir / "ingest_stats.json", stats)
    return [out_dir / "clean_docs.jsonl", out_dir / "url_mentions.jsonl",
            out_dir / "ingest_stats.json"]


def stage_lda(config: PipelineConfig, out_dir: Path) -> list[Path]:
    section = config.section("lda")
    tokenizer = _tokenizer(config)
    posts = [doc for doc in _read_docs(out_dir) if doc.kind == "post"]
    if not posts:
        raise ConfigError("no posts survived ingest; cannot model post topics")
    token_lists = [tokenize(doc.text, tokenizer) for doc in posts]
    vocab = build_vocabulary(
        token_lists,
        min_df=int(section.get("min_df", 1)),
        max_df_ratio=float(section.get("max_df_ratio", 1.0)),
    )
    corpus = []
    for doc, tokens in zip(posts, token_lists):
        encoded = vocab.encode(tokens)
        if encoded:
            corpus.append((doc.id, encoded))
        else:
            logger.warning("post %s has no in-vocabulary tokens; skipped", doc.id)

    base = LdaConfig(
        num_topics=int(section.get("num_topics", 9)),
        iterations=int(section.get("iterations", 200)),
        burn_in=int(section.get("burn_in", 0)),
        alpha=section.get("alpha"),
        beta=float(section.get("beta", 0.01)),
        seed=config.seed,
    )

    written: list[Path] = []
    sweep_section = section.get("sweep") or {}
    if sweep_section.get("enabled", False):
        evaluator = coherence_evaluator(
            token_lists, vocab.terms,
            top_n=int(section.get("coherence_top_n", 10)),
            window_size=int(section.get("coherence_window", 110)))
        sweep = sweep_topic_count(
            corpus, len(vocab), base, evaluator,
            k_min=int(sweep_section.get("k_min", 5)),
            k_max=int(sweep_section.get("k_max", 30)))
        lines = ["k,coherence"]
        lines += [f"{k},{sweep.scores[k]:.6f}" for k in sorted(sweep.scores)]
        lines += [f"{k}," for k in sorted(sweep.failures)]
        atomic_write_text(out_dir / "lda_sweep.csv", "\n".join(lines) + "\n")
        written.append(out_dir / "lda_sweep.csv")
        base = dataclasses.replace(base, num_topics=sweep.best_k)
        logger.info("topic-count sweep selected K=%d", sweep.best_k)

    model = train_lda(corpus, len(vocab), base)
    model.vocab_terms = vocab.terms
    save_model(model, out_dir / "lda_model.zip")

    topics = {
        str(topic): [[term, prob] for term, prob in
                     top_terms(model, topic, 10).terms]
        for topic in range(model.num_topics)
    }
    atomic_write_json(out_dir / "lda_topics.json", topics)

    dominant = model.dominant_topics()
    post_topics = {doc_id: int(dominant[i]) for i, (doc_id, _) in enumerate(corpus)}
    atomic_write_json(out_dir / "post_topics.json", post_topics)

    written += [out_dir / "lda_model.zip", out_dir / "lda_topics.json",
                out_dir / "post_topics.json"]
    return written


def _provider(config: PipelineConfig):
    section = config.section("embed")
    kind = section.get("provider", "hash")
    if kind == "hash":
        return HashingProvider(dim=int(section.get("dim", 64)))
    if kind == "http":
        return HttpEmbeddingProvider(
            url=section.get("url"),
            model_id=section.get("model", "all-mpnet-base-v2"),
        )
    raise ConfigError(f"unknown embedding provider {kind!r}")


def stage_embed(config: PipelineConfig, out_dir: Path) -> list[Path]:
    section = config.section("embed")
    comments = [doc for doc in _read_docs(out_dir) if doc.kind == "comment"]
    if not comments:
        raise ConfigError("no comments survived ingest; cannot embed")
    provider = _provider(config)
    cache_dir = config.resolve_path(section.get("cache_dir"))
    matrix = fetch_embeddings(comments, provider, cache_dir=cache_dir,
                              batch_size=int(section.get("batch_size", 64)))
    write_embeddings(matrix, out_dir / "embeddings.emb")
    atomic_write_json(out_dir / "embeddings_meta.json", {
        "ids": list(matrix.ids or ()),
        "model_id": matrix.model_id,
        "corpus_hash": corpus_content_hash(comments),
    })
    return [out_dir / "embeddings.emb", out_dir / "embeddings_meta.json"]


def stage_cluster(config: PipelineConfig, out_dir: Path) -> list[Path]:
    section = config.section("cluster")
    matrix = load_embeddings(out_dir / "embeddings.emb").normalized()
    meta = read_json(out_dir / "embeddings_meta.json")

    reducer = ReducerConfig(
        n_neighbors=int(section.get("n_neighbors", 15)),
        min_dist=float(section.get("min_dist", 0.01)),
        n_components=int(section.get("n_components", 5)),
        epochs=int(section.get("epochs", 300)),
        seed=config.seed,
    )
    reduced = reduce_embeddings_checked(matrix, reducer)
    np.save(out_dir / "reduced.npy", reduced)

    clusterer = ClustererConfig(
        min_cluster_size=int(section.get("min_cluster_size", 50)),
        min_samples=section.get("min_samples"),
    )
    assignment = hdbscan(reduced, clusterer)
    comment_labels = {
        doc_id: int(label)
        for doc_id, label in zip(meta["ids"], assignment.labels)
    }
    atomic_write_json(out_dir / "clusters.json", {
        "assignment": assignment.to_dict(),
        "comment_labels": comment_labels,
        "min_cluster_size": clusterer.min_cluster_size,
        "min_samples": clusterer.effective_min_samples,
    })
    return [out_dir / "reduced.npy", out_dir / "clusters.json"]


def reduce_embeddings_checked(matrix: EmbeddingMatrix, reducer: ReducerConfig):
    from ..embed import reduce_embeddings

    if matrix.n <= reducer.n_neighbors:
        raise ConfigError(
            f"{matrix.n} comments is too few for n_neighbors={reducer.n_neighbors}")
    return reduce_embeddings(matrix.values.astype(np.float64), reducer)


def stage_represent(config: PipelineConfig, out_dir: Path) -> list[Path]:
    section = config.section("represent")
    tokenizer = _tokenizer(config)
    comments = [doc for doc in _read_docs(out_dir) if doc.kind == "comment"]
    clusters = read_json(out_dir / "clusters.json")
    comment_labels = clusters["comment_labels"]

    docs_tokens = [tokenize(doc.text, tokenizer) for doc in comments]
    labels = [int(comment_labels.get(doc.id, -1)) for doc in comments]

    vectorizer = VectorizerConfig(
        ngram_range=(int(section.get("ngram_min", 1)),
                     int(section.get("ngram_max", 2))),
        min_df=int(section.get("min_df", 2)),
    )
    model = fit_ctfidf(docs_tokens, labels, vectorizer)

    lam = float(section.get("mmr_lambda", 0.4))
    top_n = int(section.get("top_keywords", 10))
    reps_n = int(section.get("representative_docs", 3))
    llm_section = section.get("llm") or {}
    client = LlmClient(
        url=llm_section.get("url"),
        model=llm_section.get("model"),
        enabled=bool(llm_section.get("enabled", False)),
    ) if llm_section.get("enabled", False) else None

    by_cluster: dict[int, list[tuple[str, list[str]]]] = {}
    texts_by_id = {doc.id: doc.text for doc in comments}
    for doc, doc_tokens, label in zip(comments, docs_tokens, labels):
        if label != -1:
            by_cluster.setdefault(label, []).append((doc.id, doc_tokens))

    representations = []
    for class_id in model.class_ids:
        raw_terms = model.top_terms(class_id, max(top_n * 3, 20))
        # One-hot term vectors: diversification degenerates to relevance
        # order, which keeps fully offline runs deterministic and honest.
        one_hot = {term: _basis_vector(i, len(raw_terms))
                   for i, (term, _) in enumerate(raw_terms)}
        keywords = mmr_select(raw_terms, one_hot, lam=lam, n=top_n)
        members = by_cluster.get(class_id, [])
        rep_ids = representative_docs(members, model, class_id, n=reps_n,
                                      ngram_range=vectorizer.ngram_range)
        label_text, summary, source = llm_label(
            class_id, keywords, [texts_by_id[i] for i in rep_ids], client)
        representations.append(TopicRepresentation(
            topic_id=class_id,
            keywords=keywords,
            raw_ctfidf_terms=raw_terms,  # full candidate pool: keywords stay a subset
            label=label_text,
            summary=summary,
            representative_doc_ids=rep_ids,
            size=len(members),
            label_source=source,
        ))

    atomic_write_json(out_dir / "topics.json",
                      [rep.to_dict() for rep in representations])
    atomic_write_json(out_dir / "topics_meta.json", {
        "mmr_similarity": "one_hot",
        "mmr_lambda": lam,
        "top_keywords": top_n,
    })
    return [out_dir / "topics.json", out_dir / "topics_meta.json"]


def _basis_vector(index: int, size: int):
    vec = np.zeros(size)
    vec[index] = 1.0
    return vec


def stage_coherence(config: PipelineConfig, out_dir: Path) -> list[Path]:
    section = config.section("coherence")
    tokenizer = _tokenizer(config)
    docs = _read_docs(out_dir)
    cfg = CoherenceConfig(
        window_size=int(section.get("window_size", 110)),
        top_n=int(section.get("top_n", 10)),
    )
    source = section.get("source", "comments")
    if source not in ("comments", "posts", "both"):
        raise ConfigError(f"coherence source must be comments|posts|both, not {source!r}")

    post_streams = [tokenize(d.text, tokenizer) for d in docs if d.kind == "post"]
    comment_streams = [tokenize(d.text, tokenizer) for d in docs if d.kind == "comment"]
    reference = {"comments": comment_streams, "posts": post_streams,
                 "both": post_streams + comment_streams}[source]

    lda_topics = read_json(out_dir / "lda_topics.json")
    post_topic_ids = sorted(int(t) for t in lda_topics)
    post_words = [[term for term, _ in lda_topics[str(t)]] for t in post_topic_ids]
    posts_report = cv_coherence(post_words, post_streams, cfg,
                                topic_ids=post_topic_ids)
    atomic_write_json(out_dir / "coherence_posts.json", posts_report.to_dict())

    topics = read_json(out_dir / "topics.json")
    cluster_ids = [t["topic_id"] for t in topics]
    cluster_words = [[term for term, _ in t["raw_ctfidf_terms"]] for t in topics]
    comments_report = cv_coherence(cluster_words, reference, cfg,
                                   topic_ids=cluster_ids)
    atomic_write_json(out_dir / "coherence_comments.json", comments_report.to_dict())
    return [out_dir / "coherence_posts.json", out_dir / "coherence_comments.json"]


def _label_sets_to_json(label_sets: dict[int, TopicLabelSet]) -> dict:
    return {str(k): v.to_dict() for k, v in sorted(label_sets.items())}


def _label_sets_from_json(obj: dict) -> dict[int, TopicLabelSet]:
    return {int(k): TopicLabelSet.from_dict(v) for k, v in obj.items()}


def stage_map(config: PipelineConfig, out_dir: Path) -> list[Path]:
    section = config.section("map")
    schema = load_schema(config.resolve_path(section.get("schema")))
    rules = load_rules(config.resolve_path(section.get("rules")), schema=schema)
    grief_lexicon = load_lexicon(config.resolve_path(section.get("grief_lexicon")),
                                 bundled_name="grief_lexicon.json")
    mh_lexicon = load_lexicon(
        config.resolve_path(section.get("mental_health_lexicon")),
        bundled_name="mental_health_lexicon.json")

    docs = _read_docs(out_dir)
    texts_by_id = {doc.id: doc.text for doc in docs}

    # Post-track topics: LDA top terms are the keyword evidence.
    lda_topics = read_json(out_dir / "lda_topics.json")
    post_auto: dict[int, TopicLabelSet] = {}
    for key, terms in lda_topics.items():
        topic_id = int(key)
        keywords = [term for term, _ in terms]
        labels = map_topic(topic_id, keywords, "", rules, schema)
        grief, mh = flag_grief_mh([], keywords, grief_lexicon, mh_lexicon)
        post_auto[topic_id] = dataclasses.replace(
            labels, grief=labels.grief or grief,
            mental_health=labels.mental_health or mh)

    # Comment-track topics: keywords, generated label, representative docs.
    topics = read_json(out_dir / "topics.json")
    cluster_auto: dict[int, TopicLabelSet] = {}
    for topic in topics:
        topic_id = int(topic["topic_id"])
        keywords = list(topic["keywords"])
        labels = map_topic(topic_id, keywords, topic.get("label", ""), rules, schema)
        rep_texts = [texts_by_id[i] for i in topic["representative_doc_ids"]
                     if i in texts_by_id]
        grief, mh = flag_grief_mh(rep_texts, keywords, grief_lexicon, mh_lexicon)
        cluster_auto[topic_id] = dataclasses.replace(
            labels, grief=labels.grief or grief,
            mental_health=labels.mental_health or mh)

    auto_payload = {"posts": _label_sets_to_json(post_auto),
                    "comments": _label_sets_to_json(cluster_auto)}
    atomic_write_json(out_dir / "topic_labels_auto.json", auto_payload)

    # Review overrides apply to the comment-track topics (what the console
    # edits); the post track accepts a separate file.
    overrides_path = config.resolve_path(section.get("overrides"))
    if overrides_path is None:
        candidate = out_dir / "overrides.json"
        overrides_path = candidate if candidate.is_file() else None
    cluster_final = apply_review(
        cluster_auto,
        load_overrides(overrides_path) if overrides_path else {})

    post_overrides_path = config.resolve_path(section.get("post_overrides"))
    post_final = apply_review(
        post_auto,
        load_overrides(post_overrides_path) if post_overrides_path else {})

    final_payload = {"posts": _label_sets_to_json(post_final),
                     "comments": _label_sets_to_json(cluster_final)}
    atomic_write_json(out_dir / "topic_labels_final.json", final_payload)

    post_topics = {k: int(v) for k, v in read_json(out_dir / "post_topics.json").items()}
    comment_labels = {k: int(v) for k, v in
                      read_json(out_dir / "clusters.json")["comment_labels"].items()}
    instances = [(doc.id, doc.kind, doc.link_id) for doc in docs]
    result = propagate_labels(instances, post_topics, comment_labels,
                              post_final, cluster_final)

    lines = [json.dumps(x.to_dict(), sort_keys=True) for x in result.instances]
    atomic_write_text(out_dir / "instance_labels.jsonl",
                      "\n".join(lines) + ("\n" if lines else ""))
    atomic_write_json(out_dir / "map_stats.json", {
        **result.stats,
        "unresolved_parents": result.unresolved_parents,
        "unlabeled_posts": result.unlabeled_posts,
    })
    return [out_dir / "topic_labels_auto.json", out_dir / "topic_labels_final.json",
            out_dir / "instance_labels.jsonl", out_dir / "map_stats.json"]


def stage_analyze(config: PipelineConfig, out_dir: Path) -> list[Path]:
    section = config.section("analyze")
    docs = _read_docs(out_dir)
    doc_by_id = {doc.id: doc for doc in docs}

    labeled: list[InstanceLabels] = []
    with open(out_dir / "instance_labels.jsonl", "r", encoding="utf-8") as handle:
        for line in handle:
            if line.strip():
                labeled.append(InstanceLabels.from_dict(json.loads(line)))
    labels_by_id = {x.instance_id: x for x in labeled}

    upset_sa = analytics.upset_intersections([x.sa_labels for x in labeled], "sa")
    upset_cn = analytics.upset_intersections([x.cn_labels for x in labeled], "cn")

    stamps = {x.instance_id: doc_by_id[x.instance_id].created_utc for x in labeled}
    denominator = section.get("cn_denominator", "cn")
    series = analytics.temporal_bins(labeled, stamps, config.timezone,
                                     denominator=denominator)
    segments = analytics.time_of_day_segments(labeled, stamps, config.timezone,
                                              denominator=denominator)

    fire_map_path = config.resolve_path(section.get("fire_map"))
    fire_map = (analytics.FireMap.from_file(fire_map_path)
                if fire_map_path else analytics.FireMap.bundled())
    partition = analytics.partition_by_fire(
        [(x.instance_id, doc_by_id[x.instance_id].subreddit,
          doc_by_id[x.instance_id].text) for x in labeled],
        fire_map)

    from ..ingest.records import UrlMention

    mentions = []
    mentions_path = out_dir / "url_mentions.jsonl"
    with open(mentions_path, "r", encoding="utf-8") as handle:
        for line in handle:
            if line.strip():
                obj = json.loads(line)
                mentions.append(UrlMention(obj["url"], obj["domain"],
                                           obj["source_id"]))
    health_path = config.resolve_path(section.get("health_domains"))
    health = analytics.load_health_domains(health_path)
    url_report = analytics.url_rank(mentions, labels_by_id, health)

    return analytics.emit_report(out_dir, upset_sa, upset_cn, series, segments,
                                 partition, url_report)


_STAGE_FUNCTIONS = {
    "ingest": stage_ingest,
    "lda": stage_lda,
    "embed": stage_embed,
    "cluster": stage_cluster,
    "represent": stage_represent,
    "coherence": stage_coherence,
    "map": stage_map,
    "analyze": stage_analyze,
}


def run_stage(stage: str, config: PipelineConfig, out_dir: str | Path) -> PipelineManifest:
    """Run one stage behind the manifest's staleness gate."""
    if stage not in _STAGE_FUNCTIONS:
        raise ConfigError(f"unknown stage {stage!r}; stages are {', '.join(STAGES)}")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    manifest = PipelineManifest.load(out_dir)
    consumed = manifest.verify_upstream(stage)
    if stage == "ingest":
        consumed["corpus"] = sha256_file(config.corpus_path())

    written = _STAGE_FUNCTIONS[stage](config, out_dir)
    manifest.record_stage(stage, config.content_hash(), config.seed,
                          consumed, written)
    logger.info("stage %s complete: %d artifacts", stage, len(written))
    return manifest


def run_all(config: PipelineConfig, out_dir: str | Path) -> PipelineManifest:
    manifest = None
    for stage in STAGES:
        manifest = run_stage(stage, config, out_dir)
    return manifest
