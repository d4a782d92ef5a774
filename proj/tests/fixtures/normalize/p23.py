import sys
input = sys.stdin.readline
n = int(input())
rows = [tuple(map(int, input().split())) for _ in range(n)]
rows.sort(key=lambda p: (p[1], -p[0]))
for a, b in rows:
    print(a, b)
