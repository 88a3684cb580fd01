# Primitivity rank and the leading correction term.
from wreathwords.exactnum import format_rf
from wreathwords.freegrp import parse_word
from wreathwords.groups import builtin
from wreathwords.measure import verify_main_theorem
from wreathwords.stable import StableFunction
from wreathwords.whitehead import critical_values, is_primitive, min_cyclic_length, primitivity_rank

# Whitehead descent: a primitive word shrinks to a single letter.
w = parse_word("aabab")
length, chain = min_cyclic_length(w)
print(w, "primitive:", is_primitive(w), "min cyclic length:", length, "steps:", len(chain))

for text in ["ab", "aabb", "abAB", "aabbcc", "abABcdCD"]:
    rep = primitivity_rank(parse_word(text))
    print(f"{text:10s} pi = {rep.pi_json()}  |Crit| = {rep.crit_count}")

# The expansion E_w[f] = c0 + c_sub * n^(1-pi) + ... with c_sub read off the critical subgroups.
S3 = builtin("sym3")
std = S3.char_names.index("std")
w = parse_word("abAB")
rep = verify_main_theorem(w, StableFunction.ind(S3, std), S3)
print("E_[a,b][Ind(std)] =", format_rf(rep["value"]))
print("c0 =", rep["c0"], " c_sub =", rep["c_sub"], " pass:", rep["pass"])
print("critical values:", [str(x) for x in critical_values(w, S3.characters[std], S3)])
