"""Structure-preserving maps between the Catalan families, with inverses.

The Dyck path is the pivot: partitions, plane trees, full binary trees
and pairings all convert through it.  The doubling construction maps a
partition of [n] to a pairing of [2n] and transports the width statistic.
"""

from __future__ import annotations

from .structures import (
    BinaryTree,
    DyckPath,
    NCPairing,
    NCPartition,
    PlanarTree,
    ValidationError,
)


def dyck_to_partition(path: DyckPath) -> NCPartition:
    """Read the partition off a Dyck path.

    Up steps are labeled 1..n in order; every maximal run of down steps
    pops the labels of the matching up steps and forms one block.
    """
    label = 0
    stack: list[int] = []
    blocks: list[list[int]] = []
    prev_down = False
    for s in path.steps:
        if s == 1:
            label += 1
            stack.append(label)
            prev_down = False
        else:
            popped = stack.pop()
            if prev_down:
                blocks[-1].append(popped)
            else:
                blocks.append([popped])
            prev_down = True
    return NCPartition(path.n, tuple(tuple(b) for b in blocks))


def partition_to_dyck(pi: NCPartition) -> DyckPath:
    """Inverse of dyck_to_partition: each block closes right after its maximum."""
    block_of = {}
    for block in pi.blocks:
        for x in block:
            block_of[x] = block
    steps: list[int] = []
    for x in range(1, pi.n + 1):
        steps.append(1)
        block = block_of[x]
        if x == block[-1]:
            steps.extend([-1] * len(block))
    return DyckPath(tuple(steps))


def dyck_to_planar_tree(path: DyckPath) -> PlanarTree:
    """Depth-first-walk reading: up descends into a new child, down ascends."""
    stack: list[list[PlanarTree]] = [[]]
    for s in path.steps:
        if s == 1:
            stack.append([])
        else:
            kids = stack.pop()
            stack[-1].append(PlanarTree(tuple(kids)))
    return PlanarTree(tuple(stack[0]))


def planar_tree_to_dyck(tree: PlanarTree) -> DyckPath:
    steps: list[int] = []
    stack = [iter(tree.children)]
    while stack:
        child = next(stack[-1], None)
        if child is None:
            stack.pop()
            if stack:
                steps.append(-1)
        else:
            steps.append(1)
            stack.append(iter(child.children))
    return DyckPath(tuple(steps))


def _heights(steps: tuple[int, ...]) -> list[int]:
    out = []
    h = 0
    for s in steps:
        h += s
        out.append(h)
    return out


def _build_binary(steps: tuple[int, ...], labels: list[int]) -> BinaryTree:
    """Recursive construction on a labeled step sequence.

    A single-excursion path U S D becomes a new root whose left edge is a
    labeled leaf edge and whose right subtree encodes S.  Otherwise the
    path splits before its final excursion and the prefix tree is glued
    onto the leaf immediately left of the suffix tree's root.
    """
    heights = _heights(steps)
    last_return = None
    for i in range(len(steps) - 1):
        if heights[i] == 0:
            last_return = i
    if last_return is None:
        # single excursion U S D
        inner = steps[1:-1]
        right = (
            _build_binary(inner, labels[1:]) if inner else BinaryTree()
        )
        return BinaryTree(left=BinaryTree(), right=right, label=labels[0])
    split = last_return + 1
    ups_before = sum(1 for s in steps[:split] if s == 1)
    prefix = _build_binary(steps[:split], labels[:ups_before])
    suffix = _build_binary(steps[split:], labels[ups_before:])
    return BinaryTree(left=prefix, right=suffix.right, label=suffix.label)


def dyck_to_binary_tree(path: DyckPath) -> BinaryTree:
    """Map a Dyck path with 2n steps to a full binary tree on 2n+1 vertices."""
    if path.n == 0:
        return BinaryTree()
    return _build_binary(path.steps, list(range(1, path.n + 1)))


def binary_tree_to_dyck(tree: BinaryTree) -> DyckPath:
    """Inverse map; only the tree shape matters, labels are re-derived."""
    steps: list[int] = []

    def emit(node: BinaryTree) -> None:
        if node.is_leaf:
            return
        emit(node.left)  # type: ignore[arg-type]
        steps.append(1)
        emit(node.right)  # type: ignore[arg-type]
        steps.append(-1)

    emit(tree)
    return DyckPath(tuple(steps))


def binary_tree_blocks(tree: BinaryTree) -> NCPartition:
    """Read the partition from a labeled binary tree.

    Each leaf closing a right edge starts a block: walk back towards the
    root while the edge climbed is a right edge, collecting the labels of
    the left edges hanging off the visited vertices.
    """
    if tree.is_leaf:
        return NCPartition(0, ())
    blocks: list[list[int]] = []

    def label_of(node: BinaryTree) -> int:
        if node.label is None:
            raise ValidationError("internal vertex is missing its left-edge label")
        return node.label

    # walk the tree; for every right leaf, climb right edges iteratively
    visit: list[tuple[BinaryTree, BinaryTree | None, bool]] = [(tree, None, False)]
    parent_map: dict[int, tuple[BinaryTree | None, bool]] = {}
    order: list[BinaryTree] = []
    while visit:
        node, parent, is_right = visit.pop()
        parent_map[id(node)] = (parent, is_right)
        order.append(node)
        if not node.is_leaf:
            visit.append((node.left, node, False))  # type: ignore[arg-type]
            visit.append((node.right, node, True))  # type: ignore[arg-type]
    for node in order:
        parent, is_right = parent_map[id(node)]
        if node.is_leaf and is_right and parent is not None:
            block = [label_of(parent)]
            cur, cur_right = parent, parent_map[id(parent)][1]
            while cur_right:
                cur_parent = parent_map[id(cur)][0]
                assert cur_parent is not None
                block.append(label_of(cur_parent))
                cur, cur_right = cur_parent, parent_map[id(cur_parent)][1]
            blocks.append(block)
    n = (tree.vertex_count() - 1) // 2
    return NCPartition(n, tuple(tuple(b) for b in blocks))


def double(pi: NCPartition) -> NCPairing:
    """Doubling construction: split each point x into 2x-1 and 2x.

    A singleton {x} becomes the pair (2x-1, 2x); a block x1<...<xk becomes
    the outer pair (2*x1-1, 2*xk) plus the inner pairs (2*xi, 2*x(i+1)-1).
    """
    pairs: list[tuple[int, int]] = []
    for block in pi.blocks:
        if len(block) == 1:
            x = block[0]
            pairs.append((2 * x - 1, 2 * x))
        else:
            pairs.append((2 * block[0] - 1, 2 * block[-1]))
            for a, b in zip(block, block[1:]):
                pairs.append((2 * a, 2 * b - 1))
    return NCPairing(2 * pi.n, tuple(pairs))


def undouble(pairing: NCPairing) -> NCPartition:
    """Inverse of double; raises ValidationError off the image."""
    if pairing.m % 2:
        raise ValidationError("doubled pairings have even ground sets")
    n = pairing.m // 2
    start = {a: b for a, b in pairing.pairs}
    consumed: set[int] = set()
    blocks: list[list[int]] = []
    for a, b in pairing.pairs:
        if a in consumed:
            continue
        if a % 2 == 0:
            raise ValidationError(
                f"pair opening at even position {a} is not chained to any block"
            )
        consumed.add(a)
        x1 = (a + 1) // 2
        block = [x1]
        if b == a + 1:
            blocks.append(block)
            continue
        if b % 2:
            raise ValidationError(f"outer pair ({a},{b}) must close at an even position")
        cur = a + 1
        while True:
            if cur not in start:
                raise ValidationError(f"broken block chain at position {cur}")
            nxt = start[cur]
            if nxt % 2 == 0:
                raise ValidationError(f"inner pair ({cur},{nxt}) must close oddly")
            consumed.add(cur)
            x = (nxt + 1) // 2
            block.append(x)
            if 2 * x == b:
                break
            if 2 * x > b:
                raise ValidationError("block chain escapes its outer pair")
            cur = nxt + 1
        blocks.append(block)
    pi = NCPartition(n, tuple(tuple(b) for b in blocks))
    if double(pi) != pairing:
        raise ValidationError("pairing is not of doubled form")
    return pi


def pairing_to_dyck(pairing: NCPairing) -> DyckPath:
    """Openers step up, closers step down; path height tracks pairing width."""
    opens = {a for a, _ in pairing.pairs}
    steps = tuple(1 if i in opens else -1 for i in range(1, pairing.m + 1))
    return DyckPath(steps)
