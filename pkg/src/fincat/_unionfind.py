class UnionFind:
    """Disjoint sets over ``0..n-1``; the root of a class is its smallest member."""

    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        parent = self.parent
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, x: int, y: int) -> None:
        px, py = self.find(x), self.find(y)
        if px < py:
            self.parent[py] = px
        elif py < px:
            self.parent[px] = py
