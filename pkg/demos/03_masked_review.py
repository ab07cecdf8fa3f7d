"""What a clerical reviewer actually sees.

Builds masked displays for a handful of crafted pairs: full agreement
collapses to a symbol (with a frequency hint), strong disagreement to
another symbol, and the ambiguous middle ground is shown with shared
characters starred out and digits replaced by alignment placeholders.
Also shows how the three request strategies narrow what is asked for.
"""

from layerlink.encoding import (
    EncodingParams,
    PlainRecord,
    encode_keyed_attributes,
)
from layerlink.matching import compare_attributes
from layerlink.review import (
    SelectionStrategy,
    build_mask,
    build_view,
    select_attributes,
)


def record(record_id: str, **values) -> PlainRecord:
    base = dict.fromkeys(
        ("first_name", "middle_name", "last_name", "yob", "city", "zip", "pob")
    )
    base.update(values)
    return PlainRecord(record_id=record_id, values=base)


def show(title: str, mask) -> None:
    if mask.kind == "partial":
        print(f"  {title:<22} partial   a={mask.display_a!r} b={mask.display_b!r}")
    elif mask.kind == "agree":
        hint = f" ({mask.freq})" if mask.freq else ""
        print(f"  {title:<22} agree{hint}")
    else:
        print(f"  {title:<22} {mask.kind}")


def main() -> None:
    print("hand-built masks:")
    show("PAULA vs PAUL", build_mask("PAULA", "PAUL", 0.85))
    show("1963-08-06 vs -09", build_mask("1963-08-06", "1963-08-09", 0.9))
    show("12345 vs 67890", build_mask("12345", "67890", 0.5))
    show("identical, rare", build_mask("ZELDA", "ZELDA", 1.0, freq_label=3))
    show("identical, common", build_mask("SMITH", "SMITH", 1.0, freq_label=1))
    show("unrelated", build_mask("AAAA", "ZZZZ", 0.1))

    # A realistic pair: same person, last name typo, cities differ.
    secret = b"\x07" * 32
    params = EncodingParams()
    pair_key = b"\x01" * 16
    alice_a = record(
        "a-1", first_name="MARTHA", last_name="REYNOLDS", yob="1971",
        city="GREENVILLE", zip="29601",
    )
    alice_b = record(
        "b-1", first_name="MARTHA", last_name="RENOLDS", yob="1971",
        city="COLUMBIA", zip="29201",
    )
    enc_a = encode_keyed_attributes(alice_a, params, secret, pair_key)
    enc_b = encode_keyed_attributes(alice_b, params, secret, pair_key)
    comparison = compare_attributes(enc_a, enc_b)
    print("\npair-keyed similarities for the crafted pair:")
    for attr, sim in comparison.sims.items():
        print(f"  {attr:<12} {sim:.3f}")

    present_a = {a for a, v in alice_a.values.items() if v}
    present_b = {a for a, v in alice_b.values.items() if v}
    print("\nplaintext requested by each strategy:")
    for strategy in SelectionStrategy:
        requested = select_attributes(comparison, present_a, present_b, strategy)
        print(f"  {strategy.value:<25} {', '.join(requested) or '(nothing)'}")

    # The view only reveals plaintext that was actually disclosed;
    # similarities alone are never enough for a partial mask.
    requested = select_attributes(
        comparison, present_a, present_b, SelectionStrategy.NO_EQUAL_NO_DISSIMILAR
    )
    disclosed_a = {a: alice_a.values[a] for a in requested}
    disclosed_b = {a: alice_b.values[a] for a in requested}
    print("\nreview display under the most restrictive strategy:")
    for attr, mask in build_view(comparison, disclosed_a, disclosed_b).items():
        show(attr, mask)


if __name__ == "__main__":
    main()
