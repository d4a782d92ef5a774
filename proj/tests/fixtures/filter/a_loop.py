n = int(input())
t = 0
for i in range(n + 1):
    t += i
print(t)
