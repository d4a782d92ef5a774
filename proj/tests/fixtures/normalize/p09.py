import heapq
n = int(input())
heap = []
for v in map(int, input().split()):
    heapq.heappush(heap, v)
acc = 0
while len(heap) > 1:
    a = heapq.heappop(heap)
    b = heapq.heappop(heap)
    acc += a + b
    heapq.heappush(heap, a + b)
print(acc)
