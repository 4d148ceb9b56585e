"""Independent reference computations used by the tests.

Nothing here goes through the library's composition, orbit or census code:
isometries are plain dicts ``word -> image word`` built by walking paths.
"""

import itertools


def words(m, n):
    return list(itertools.product(*(range(x) for x in m[:n])))


def all_labellings(m, n):
    """Every portrait of Iso(T_n) as a dict ``vertex -> perm``."""
    internal = [v for k in range(n) for v in words(m, k)]
    choices = [list(itertools.permutations(range(m[len(v)]))) for v in internal]
    for combo in itertools.product(*choices):
        yield dict(zip(internal, combo))


def walk(labels, word):
    """Image of ``word``: each letter permuted by the label at its original prefix."""
    return tuple(labels[tuple(word[:i])][a] for i, a in enumerate(word))


def leaf_map(labels, m, n):
    return {w: walk(labels, w) for w in words(m, n)}


def then(f, g):
    """Maps as dicts: first f, then g."""
    return {w: g[f[w]] for w in f}


def inv(f):
    return {v: w for w, v in f.items()}


def freeze(f):
    return tuple(sorted(f.items()))


def conjugacy_partition(maps):
    """Partition of ``maps`` (list of leaf dicts forming a group) into conjugacy classes."""
    keys = [freeze(f) for f in maps]
    index = {k: i for i, k in enumerate(keys)}
    cls = [-1] * len(maps)
    count = 0
    for i, g in enumerate(maps):
        if cls[i] >= 0:
            continue
        for a in maps:
            j = index[freeze(then(inv(a), then(g, a)))]
            cls[j] = count
        count += 1
    return cls


def class_count_recurrence(n):
    """Classes of the full binary Iso(T_n): a(1) = 2, a(k+1) = a(k) + a(k)(a(k)+1)/2."""
    a = 2
    for _ in range(n - 1):
        a = a + a * (a + 1) // 2
    return a


def to_int(word):
    return sum(a << i for i, a in enumerate(word))


def to_word(x, n):
    return tuple((x >> i) & 1 for i in range(n))


def cycle_lengths_of(mapping):
    seen, out = set(), []
    for start in mapping:
        if start in seen:
            continue
        n, x = 0, start
        while x not in seen:
            seen.add(x)
            x = mapping[x]
            n += 1
        out.append(n)
    return sorted(out)


def matmul(a, b, q):
    return (
        (a[0] * b[0] + a[1] * b[2]) % q,
        (a[0] * b[1] + a[1] * b[3]) % q,
        (a[2] * b[0] + a[3] * b[2]) % q,
        (a[2] * b[1] + a[3] * b[3]) % q,
    )


def sl2(q):
    return [x for x in itertools.product(range(q), repeat=4) if (x[0] * x[3] - x[1] * x[2]) % q == 1]


def sl2_inverse(x, q):
    return (x[3], -x[1] % q, -x[2] % q, x[0])


def ut2_classes_by_brute_force(p, n):
    """Classes of a12 in Z/p^n under (1,a;0,1) -> x (1,a;0,1) x^-1, x in SL_2(Z/p^n)."""
    q = p**n
    group = sl2(q)
    seen, classes = set(), []
    for a in range(q):
        if a in seen:
            continue
        orbit = set()
        for x in group:
            b = matmul(matmul(x, (1, a, 0, 1), q), sl2_inverse(x, q), q)
            if b[0] == 1 and b[2] == 0 and b[3] == 1:
                orbit.add(b[1])
        seen |= orbit
        classes.append(orbit)
    return classes
