class Point:
    def __init__(self, x, y):
        self.x = x
        self.y = y

    def norm2(self):
        return self.x * self.x + self.y * self.y

pts = []
for _ in range(int(input())):
    px, py = map(int, input().split())
    pts.append(Point(px, py))
far = max(pts, key=lambda pt: pt.norm2())
print(far.x, far.y)
