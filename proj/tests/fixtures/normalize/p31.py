n = int(input())
dp = [0] * (n + 1)
dp[0] = 1
for coin in (1, 5, 10, 25):
    for v in range(coin, n + 1):
        dp[v] += dp[v - coin]
print(dp[n])
