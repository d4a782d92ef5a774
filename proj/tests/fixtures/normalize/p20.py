from collections import deque
n, m = map(int, input().split())
adj = [[] for _ in range(n + 1)]
for _ in range(m):
    u, v = map(int, input().split())
    adj[u].append(v)
    adj[v].append(u)
dist = [-1] * (n + 1)
dist[1] = 0
queue = deque([1])
while queue:
    node = queue.popleft()
    for nxt in adj[node]:
        if dist[nxt] < 0:
            dist[nxt] = dist[node] + 1
            queue.append(nxt)
print(dist[n])
