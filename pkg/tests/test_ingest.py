import io
import json

from hypothesis import given, settings, strategies as st

from conftest import make_curated, utc
from emodyn.ingest import (RawTweet, corpus_stats, curate, curated_from_json,
                           curated_to_json, parse_records, parse_timestamp)


def jsonl(*objs):
    return io.StringIO("\n".join(json.dumps(o) for o in objs) + "\n")


def raw(tweet_id="t1", speaker="alice", when="2020-06-01T10:00:00Z",
        language="en", retweet=False, url=False, text="one two three words",
        country="ca", city="toronto"):
    return {
        "tweet_id": tweet_id, "speaker_id": speaker, "created_at": when,
        "country": country, "city": city, "language": language,
        "is_retweet": retweet, "has_url_or_media": url, "text": text,
    }


def test_parse_happy_path_preserves_order():
    stream = jsonl(raw("a"), raw("b"), raw("c"))
    records = list(parse_records(stream))
    assert [r.tweet_id for r in records] == ["a", "b", "c"]


def test_parse_missing_speaker_dropped_with_reason():
    obj = raw()
    del obj["speaker_id"]
    failures = []
    records = list(parse_records(jsonl(obj, raw("ok")), failures=failures))
    assert [r.tweet_id for r in records] == ["ok"]
    assert len(failures) == 1
    assert failures[0].reason == "missing_field:speaker_id"


def test_parse_invalid_json_counted():
    stream = io.StringIO("not json\n" + json.dumps(raw()) + "\n")
    failures = []
    records = list(parse_records(stream, failures=failures))
    assert len(records) == 1
    assert failures[0].reason == "invalid_json"


def test_parse_bad_timestamp():
    failures = []
    list(parse_records(jsonl(raw(when="yesterday")), failures=failures))
    assert failures[0].reason == "invalid_field:created_at"


def test_parse_csv_with_header():
    stream = io.StringIO(
        "tweet_id,speaker_id,created_at,country,city,language,is_retweet,has_url_or_media,text\n"
        "t1,alice,2020-06-01T10:00:00Z,ca,toronto,en,false,false,hello there world\n"
        "t2,bob,2020-06-01T11:00:00Z,,,en,true,,two tokens\n"
    )
    records = list(parse_records(stream, "csv"))
    assert len(records) == 2
    assert records[0].tweet_id == "t1" and records[0].is_retweet is False
    assert records[1].is_retweet is True
    assert records[1].has_url_or_media is None  # empty cell: flag absent
    assert records[1].country is None


def test_timestamp_z_suffix_and_offset():
    a = parse_timestamp("2020-06-01T10:00:00Z")
    b = parse_timestamp("2020-06-01T12:00:00+02:00")
    assert a == b


def test_curate_drops_by_rule():
    records = [
        RawTweet("t1", "a", utc(2020, 6, 1, 10), language="fr", text="quoi de neuf ici"),
        RawTweet("t2", "a", utc(2020, 6, 1, 10), language="en", is_retweet=True,
                 text="nice long retweet body"),
        RawTweet("t3", "a", utc(2020, 6, 1, 10), language="en", has_url_or_media=True,
                 text="look at this thing"),
        RawTweet("t4", "a", utc(2020, 6, 1, 10), language="en", text="too short"),
        RawTweet("t5", "a", utc(2020, 6, 1, 10), language="en", text="kept tweet right here"),
    ]
    out, stats = curate(records)
    assert [t.tweet_id for t in out] == ["t5"]
    assert stats.dropped_per_rule == {
        "language": 1, "retweet": 1, "url_or_media": 1, "min_tokens": 1, "one_per_day": 0}
    assert stats.conserved


def test_curate_url_detected_from_text_when_flag_absent():
    records = [
        RawTweet("t1", "a", utc(2020, 6, 1), language="en", has_url_or_media=None,
                 text="see www.example.com folks"),
        RawTweet("t2", "a", utc(2020, 6, 2), language="en", has_url_or_media=None,
                 text="see HTTPS://EXAMPLE.COM folks"),
        RawTweet("t3", "a", utc(2020, 6, 3), language="en", has_url_or_media=False,
                 text="flag says no www.example.com"),
    ]
    out, stats = curate(records)
    # t3's explicit flag wins over the text heuristic
    assert [t.tweet_id for t in out] == ["t3"]
    assert stats.dropped_per_rule["url_or_media"] == 2


def test_curate_one_per_day_keeps_earliest():
    records = [
        RawTweet("t1", "a", utc(2020, 6, 1, 12), language="en", text="noon post here now"),
        RawTweet("t2", "a", utc(2020, 6, 1, 8), language="en", text="earlier post wins today"),
        RawTweet("t3", "a", utc(2020, 6, 1, 18), language="en", text="evening post loses again"),
    ]
    out, stats = curate(records)
    assert [t.tweet_id for t in out] == ["t2"]
    assert stats.dropped_per_rule["one_per_day"] == 2


def test_curate_same_timestamp_tie_breaks_by_tweet_id():
    records = [
        RawTweet("t9", "a", utc(2020, 6, 1, 12), language="en", text="same time id nine"),
        RawTweet("t1", "a", utc(2020, 6, 1, 12), language="en", text="same time id one"),
    ]
    out, _ = curate(records)
    assert [t.tweet_id for t in out] == ["t1"]


def test_curate_day_boundary_is_utc():
    # 23:30 UTC-0300 is 02:30 UTC the next day: different day keys, both kept
    records = [
        RawTweet("t1", "a", parse_timestamp("2020-06-01T23:30:00-03:00"),
                 language="en", text="late night post one"),
        RawTweet("t2", "a", parse_timestamp("2020-06-01T20:00:00-03:00"),
                 language="en", text="same local day two"),
    ]
    out, _ = curate(records)
    assert len(out) == 2
    assert {t.day_key[1] for t in out} == {"2020-06-02", "2020-06-01"}


def test_curate_order_preserved_among_survivors():
    records = [
        RawTweet(f"t{i}", "a", utc(2020, 6, 1 + i, 10), language="en",
                 text=f"post number {i} here")
        for i in range(10)
    ]
    out, _ = curate(records)
    assert [t.tweet_id for t in out] == [f"t{i}" for i in range(10)]


def test_curate_idempotent_on_curated_fields():
    records = [
        RawTweet("t1", "a", utc(2020, 6, 1, 12), language="en", text="first day post here"),
        RawTweet("t2", "a", utc(2020, 6, 1, 8), language="en", text="earlier post wins today"),
        RawTweet("t3", "b", utc(2020, 6, 1, 9), language="en", text="other speaker post fine"),
    ]
    once, _ = curate(records)
    again, stats = curate(once)
    assert [(t.tweet_id, t.tokens) for t in again] == [(t.tweet_id, t.tokens) for t in once]
    assert stats.input_count == stats.output_count


@settings(max_examples=50, deadline=None)
@given(st.lists(st.tuples(
    st.sampled_from(["a", "b", "c"]),                    # speaker
    st.integers(min_value=1, max_value=5),               # day
    st.integers(min_value=0, max_value=23),              # hour
    st.sampled_from(["en", "fr"]),
    st.booleans(),                                       # retweet
    st.integers(min_value=0, max_value=5),               # extra tokens
), max_size=30))
def test_curate_conservation_property(rows):
    records = [
        RawTweet(f"t{i}", speaker, utc(2020, 6, day, hour), language=lang,
                 is_retweet=retweet, has_url_or_media=False,
                 text=" ".join(["tok"] * extra))
        for i, (speaker, day, hour, lang, retweet, extra) in enumerate(rows)
    ]
    out, stats = curate(records)
    assert stats.conserved
    assert stats.output_count == len(out)
    # at most one survivor per (speaker, day)
    keys = [t.day_key for t in out]
    assert len(keys) == len(set(keys))


def test_corpus_stats_basic():
    tweets = [
        make_curated("t1", "a", utc(2020, 6, 1), ["x"] * 3, country="ca"),
        make_curated("t2", "a", utc(2020, 6, 2), ["x"] * 4, country="ca"),
        make_curated("t3", "b", utc(2020, 6, 1), ["x"] * 5, country="ca"),
    ]
    stats = corpus_stats(tweets, lambda t: (t.country,))
    assert stats == {("ca",): (3, 2, 4.0)}


def test_corpus_stats_empty():
    assert corpus_stats([], lambda t: (t.country,)) == {}


def test_curated_json_roundtrip():
    tweet = make_curated("t1", "alice", utc(2020, 6, 1, 10), ["a", "b", "c"],
                         country="ca", city="toronto")
    line = curated_to_json(tweet)
    back = curated_from_json(line)
    assert back == tweet


def test_non_ascii_text_survives_curation_and_serialization():
    records = [RawTweet("t1", "a", utc(2020, 6, 1), language="en",
                        has_url_or_media=False, text="café naïve 🙂 déjà vu")]
    out, _ = curate(records)
    assert out[0].tokens == ["café", "naïve", "🙂", "déjà", "vu"]
    line = curated_to_json(out[0])
    assert "café" in line  # not escaped to \\u sequences
    assert curated_from_json(line) == out[0]
